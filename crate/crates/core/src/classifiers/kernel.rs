/// exp(-gamma * |u - v|^2)
pub fn rbf(u: &[f64], v: &[f64], gamma: f64) -> f64 {
    let sq: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
    (-gamma * sq).exp()
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn rbf_gram(points: &[&[f64]], gamma: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|u| points.iter().map(|v| rbf(u, v, gamma)).collect())
        .collect()
}

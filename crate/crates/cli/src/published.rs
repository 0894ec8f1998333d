//! Reference frequency ratios of the uniform cantilever, as published.

/// One row: η, four in-plane ratios, four out-of-plane ratios, traction, torsion.
pub type RatioRow = (f64, [f64; 4], [f64; 4], f64, f64);

pub const T1: [RatioRow; 6] = [
    (0.0, [3.5160, 22.1578, 63.3466, 281.5963], [3.5160, 22.1578, 63.3466, 281.5963], 1732.0, 1719.0),
    (2.0, [3.6218, 22.6384, 63.8495, 281.7849], [4.1373, 22.7266, 63.8809, 281.7920], 1732.0, 1719.0),
    (4.0, [3.8978, 24.0256, 65.3351, 282.3501], [5.5852, 24.3564, 65.4575, 282.3785], 1732.0, 1719.0),
    (6.0, [4.2643, 26.1815, 67.7383, 283.2900], [7.3614, 26.8602, 68.0035, 283.3535], 1732.0, 1719.0),
    (8.0, [4.6626, 28.9382, 70.9651, 284.6012], [9.2602, 30.0237, 71.4147, 284.7137], 1732.0, 1719.0),
    (10.0, [5.0653, 32.1424, 74.9079, 286.2793], [11.2106, 33.6622, 75.5725, 286.4540], 1732.0, 1719.0),
];

pub const T2: [RatioRow; 6] = [
    (0.0, [3.5160, 22.1578, 63.3466, 281.5963], [3.5160, 22.1578, 63.3466, 281.5963], 1732.0, 1719.0),
    (2.0, [4.4006, 23.3799, 64.5881, 282.0294], [4.8339, 23.4653, 64.6190, 282.0365], 1732.0, 1719.0),
    (4.0, [6.3165, 26.7142, 68.1767, 283.3255], [7.4768, 27.0120, 68.2939, 283.3538], 1732.0, 1719.0),
    (6.0, [8.5561, 31.4937, 73.7678, 285.4753], [10.4513, 32.0602, 74.0115, 285.5384], 1732.0, 1719.0),
    (8.0, [10.9044, 37.1564, 80.9404, 288.4635], [13.5265, 38.0080, 81.3349, 288.5745], 1732.0, 1719.0),
    (10.0, [13.2997, 43.3492, 89.3024, 292.2694], [16.6442, 44.4878, 89.8606, 292.4405], 1732.0, 1719.0),
];

pub const T3: [RatioRow; 6] = [
    (0.0, [1.5573, 16.2709, 51.6537, 184.8364], [1.5573, 16.2709, 51.6537, 184.8364], 866.03, 1719.0),
    (2.0, [1.7682, 18.0920, 53.7584, 186.4674], [2.6697, 18.2022, 53.7956, 186.4781], 866.03, 1719.0),
    (4.0, [2.1544, 22.6744, 59.6400, 191.2771], [4.5435, 23.0245, 59.7740, 191.3189], 866.05, 1719.0),
    (6.0, [2.5325, 28.6878, 68.3475, 199.0362], [6.5132, 29.3086, 68.6104, 199.1266], 866.09, 1719.0),
    (8.0, [2.8898, 35.3872, 78.9597, 209.4181], [8.5070, 36.2802, 79.3640, 209.5709], 866.14, 1719.0),
    (10.0, [3.2380, 42.4412, 90.8126, 222.0561], [10.5128, 43.6035, 91.3616, 222.2812], 866.20, 1719.0),
];

/// Cross-method comparison at η ∈ {0, 3, 6, 12}.
pub struct CrossMethod {
    pub eta: [f64; 4],
    pub b1z_exact: [f64; 4],
    pub b1z_one: [f64; 4],
    pub b1z_five: [f64; 4],
    pub b1z_nastran: [f64; 4],
    pub b2z_exact: [f64; 4],
    pub b2z_one: [f64; 4],
    pub b1y_one: [f64; 4],
    pub b1y_five: [f64; 4],
    pub b1y_nastran: [f64; 4],
    pub b2y_one: [f64; 4],
    pub b2y_five: [f64; 4],
    pub b2y_nastran: [f64; 4],
}

pub const T4: CrossMethod = CrossMethod {
    eta: [0.0, 3.0, 6.0, 12.0],
    b1z_exact: [3.5160, 4.7973, 7.3604, 13.1702],
    b1z_one: [3.5160, 4.7974, 7.3614, 13.1868],
    b1z_five: [3.5160, 4.7973, 7.3604, 13.1702],
    b1z_nastran: [3.5118, 4.7941, 7.3582, 13.1699],
    b2z_exact: [22.0345, 23.3203, 26.8091, 37.6031],
    b2z_one: [22.1578, 23.4189, 26.8602, 37.6372],
    b1y_one: [3.5160, 3.7435, 4.2643, 5.4640],
    b1y_five: [3.5160, 3.7434, 4.2625, 5.4233],
    b1y_nastran: [3.5118, 3.7395, 4.2595, 5.4264],
    b2y_one: [22.1578, 23.2260, 26.1815, 35.6729],
    b2y_five: [22.0345, 23.1263, 26.1284, 35.6338],
    b2y_nastran: [21.9402, 23.0296, 26.0246, 35.5066],
};

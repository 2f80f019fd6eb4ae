//! Embedded treatment-control dataset from Gallant-style nonlinear
//! regression (30 observations, covariates x0, x1, x2, x3 and four
//! simulated response sets), together with the published reference
//! values for its perturbation analysis. The model is
//! Y = theta_1 x1 + theta_2 x2 + theta_0 exp(eps x3) + noise; expanding
//! the exponential yields the design components X0, X1, X2 consumed by
//! the linmodel machinery.

use perturb_core::linmodel::PerturbedDesign;
use perturb_core::numerics::Matrix;

/// Columns: x0, x1, x2, x3, Y0, Y1, Y2, Y3.
pub const TABLE: [[f64; 8]; 30] = [
    [1.0, 1.0, 1.3420, 6.28, 6.92, 7.0451, 7.6532, 8.6632],
    [1.0, 0.0, 1.5813, 9.86, 4.21, 4.4267, 5.4939, 7.5804],
    [1.0, 1.0, 1.1043, 9.11, 4.34, 4.5297, 5.4928, 7.3125],
    [1.0, 0.0, 1.6867, 8.43, 3.81, 3.9869, 4.8595, 6.4576],
    [1.0, 1.0, 1.5164, 8.11, 3.99, 4.1633, 4.9944, 6.4946],
    [1.0, 0.0, 1.5672, 1.82, 3.95, 3.9820, 4.1358, 4.3445],
    [1.0, 1.0, 1.9644, 6.58, 6.28, 6.4206, 7.0637, 8.1464],
    [1.0, 0.0, 1.5411, 5.02, 5.63, 5.7309, 6.1986, 6.9320],
    [1.0, 1.0, 1.0064, 6.52, 4.05, 4.1857, 4.8217, 5.8897],
    [1.0, 0.0, 1.8726, 3.75, 5.53, 5.6102, 5.9462, 6.4438],
    [1.0, 1.0, 1.0314, 9.86, 5.09, 5.3012, 6.3684, 8.4550],
    [1.0, 0.0, 1.9190, 7.31, 6.16, 6.3080, 7.0388, 8.3106],
    [1.0, 1.0, 1.6507, 0.47, 5.80, 5.8132, 5.8514, 5.9001],
    [1.0, 0.0, 1.7083, 0.07, 4.98, 4.9816, 4.9873, 4.9943],
    [1.0, 1.0, 1.1261, 4.07, 4.97, 5.0493, 5.4176, 5.9709],
    [1.0, 0.0, 1.1693, 4.61, 5.38, 5.4791, 5.9032, 6.5561],
    [1.0, 1.0, 1.8063, 0.17, 7.19, 7.1955, 7.2092, 7.2264],
    [1.0, 0.0, 1.7086, 6.99, 5.19, 5.3309, 6.0228, 7.2096],
    [1.0, 1.0, 1.4324, 4.39, 6.20, 6.2895, 6.6907, 7.3021],
    [1.0, 0.0, 1.5265, 0.39, 5.14, 5.1441, 5.1757, 5.2158],
    [1.0, 1.0, 1.7009, 4.73, 4.37, 4.4670, 4.9038, 5.5798],
    [1.0, 0.0, 1.5807, 9.42, 3.82, 4.0196, 5.0253, 6.9523],
    [1.0, 1.0, 1.5538, 8.90, 5.38, 5.5706, 6.5055, 8.2547],
    [1.0, 0.0, 1.4150, 3.02, 3.12, 3.1812, 3.4459, 3.8250],
    [1.0, 1.0, 1.8566, 0.77, 5.06, 5.0730, 5.1360, 5.2176],
    [1.0, 0.0, 1.5010, 3.31, 4.08, 4.1479, 4.4406, 4.8653],
    [1.0, 1.0, 1.1584, 4.51, 5.72, 5.8164, 6.2300, 6.8639],
    [1.0, 0.0, 1.3310, 2.65, 3.89, 3.9459, 4.1756, 4.4991],
    [1.0, 1.0, 1.4981, 0.08, 6.12, 6.1169, 6.1234, 6.1314],
    [1.0, 0.0, 1.0008, 6.11, 2.84, 2.9685, 3.5571, 4.5271],
];

pub const N: usize = 30;
pub const M: usize = 3;
pub const SETS: usize = 4;

/// Design components from the exponential expansion: X0 has rows
/// (x0, x1, x2); X1 and X2 carry x3 and 0.5 x3^2 in the first row only.
pub fn design() -> PerturbedDesign {
    let mut x0 = Matrix::zeros(M, N);
    let mut x1 = Matrix::zeros(M, N);
    let mut x2 = Matrix::zeros(M, N);
    for (i, row) in TABLE.iter().enumerate() {
        x0[(0, i)] = row[0];
        x0[(1, i)] = row[1];
        x0[(2, i)] = row[2];
        x1[(0, i)] = row[3];
        x2[(0, i)] = 0.5 * row[3] * row[3];
    }
    PerturbedDesign::new(vec![x0, x1, x2]).expect("fixture dimensions are valid")
}

/// Response vector of the given data set (0-based).
pub fn response(set: usize) -> Matrix {
    assert!(set < SETS, "data set index out of range");
    Matrix::col_vec(&TABLE.iter().map(|r| r[4 + set]).collect::<Vec<_>>())
}

/// Published reference values for the analysis of this dataset. The
/// published covariates carried more digits than the table above, so
/// derived quantities recomputed from the table deviate from these at
/// roughly the table's rounding level (and far more where the
/// computation amplifies rounding); the verification suite measures
/// and reports those deviations.
pub mod reference {
    /// Gram-series coefficients B0, B1, B2 as published.
    pub const B0: [[f64; 3]; 3] = [
        [30.0, 15.0, 44.8534],
        [15.0, 15.0, 21.7371],
        [44.8534, 21.7371, 69.3119],
    ];
    pub const B1: [[f64; 3]; 3] = [
        [294.62, 74.55, 214.3236],
        [74.55, 0.0, 0.0],
        [214.3236, 0.0, 0.0],
    ];
    pub const B2: [[f64; 3]; 3] = [
        [2035.2007, 264.923, 738.250],
        [264.923, 0.0, 0.0],
        [738.250, 0.0, 0.0],
    ];
    /// Inverse-series coefficients C0, C1, C2 as published.
    pub const C0: [[f64; 3]; 3] = [
        [1.1523, -0.1314, -0.7045],
        [-0.1314, 0.1372, 0.0420],
        [-0.7045, 0.0420, 0.4571],
    ];
    pub const C1: [[f64; 3]; 3] = [
        [-20.6598, 1.3236, 9.3912],
        [1.3236, -0.0332, -0.4397],
        [9.3912, -0.4397, -3.7610],
    ];
    pub const C2: [[f64; 3]; 3] = [
        [-164.4712, 32.577, 147.827],
        [32.577, -4.3659, -22.4049],
        [147.8266, -22.4049, -110.1712],
    ];
    /// Perturbation-magnitude estimates for the four data sets.
    pub const EPSILON_HAT: [f64; 4] = [0.0505, 0.0195, -0.0227, -0.1861];
    /// Per data set: (theta0, se0, theta1, se1, theta2, se2, F), with
    /// the null hypothesis theta = (1, 1, 1), evaluated at epsilon_hat
    /// to first order.
    pub const AT_EPSILON_HAT: [[f64; 7]; 4] = [
        [2.0153, 0.9632, 1.0642, 0.3329, 1.6228, 0.6068, 48.7884],
        [2.2057, 0.9513, 1.0629, 0.3287, 1.5645, 0.5993, 55.2427],
        [3.0969, 0.9724, 1.0545, 0.3360, 1.2967, 0.6126, 80.1393],
        [4.6550, 1.3455, 1.0537, 0.4650, 0.8177, 0.8476, 73.7195],
    ];
    /// Same layout, evaluated at epsilon = 0.
    pub const AT_ZERO: [[f64; 7]; 4] = [
        [2.0142, 0.9605, 1.0640, 0.3327, 1.6235, 0.6064, 48.8080],
        [2.2016, 0.9499, 1.0618, 0.3283, 1.5673, 0.5984, 55.3330],
        [3.0930, 0.9725, 1.0549, 0.3362, 1.2986, 0.6126, 80.0064],
        [4.6511, 1.3450, 1.0540, 0.4650, 0.8199, 0.8472, 73.7090],
    ];
}

// Values as printed (two decimals): (setting, ec, [ATI, ATT, ATO]).

pub const TRUE_ESTIMANDS: [(u32, u32, [f64; 3]); 144] = [
    (1, 1, [0.00, 0.00, 0.00]),
    (1, 2, [0.00, 0.00, 0.00]),
    (1, 3, [0.00, 0.00, 0.00]),
    (1, 4, [0.00, 0.00, 0.00]),
    (1, 5, [0.00, 0.00, 0.00]),
    (1, 6, [0.00, 0.00, 0.00]),
    (1, 7, [0.00, 0.00, 0.00]),
    (1, 8, [0.00, 0.00, 0.00]),
    (2, 1, [0.12, 0.12, 0.12]),
    (2, 2, [0.17, 0.12, 0.21]),
    (2, 3, [0.21, 0.12, 0.28]),
    (2, 4, [0.29, 0.12, 0.41]),
    (2, 5, [0.12, 0.12, 0.12]),
    (2, 6, [0.17, 0.12, 0.18]),
    (2, 7, [0.21, 0.12, 0.25]),
    (2, 8, [0.29, 0.12, 0.36]),
    (3, 1, [0.25, 0.25, 0.25]),
    (3, 2, [0.33, 0.25, 0.41]),
    (3, 3, [0.42, 0.25, 0.56]),
    (3, 4, [0.58, 0.25, 0.82]),
    (3, 5, [0.25, 0.25, 0.25]),
    (3, 6, [0.33, 0.25, 0.37]),
    (3, 7, [0.42, 0.25, 0.49]),
    (3, 8, [0.58, 0.25, 0.73]),
    (4, 1, [0.00, 0.00, 0.00]),
    (4, 2, [0.00, 0.00, 0.00]),
    (4, 3, [0.00, 0.00, 0.00]),
    (4, 4, [0.00, 0.00, 0.00]),
    (4, 5, [0.00, 0.00, 0.00]),
    (4, 6, [0.00, 0.00, 0.00]),
    (4, 7, [0.00, 0.00, 0.00]),
    (4, 8, [0.00, 0.00, 0.00]),
    (5, 1, [0.12, 0.12, 0.12]),
    (5, 2, [0.20, 0.12, 0.18]),
    (5, 3, [0.27, 0.12, 0.23]),
    (5, 4, [0.42, 0.12, 0.35]),
    (5, 5, [0.12, 0.12, 0.12]),
    (5, 6, [0.20, 0.12, 0.16]),
    (5, 7, [0.27, 0.12, 0.20]),
    (5, 8, [0.42, 0.12, 0.30]),
    (6, 1, [0.25, 0.25, 0.25]),
    (6, 2, [0.40, 0.25, 0.35]),
    (6, 3, [0.55, 0.25, 0.46]),
    (6, 4, [0.85, 0.25, 0.71]),
    (6, 5, [0.25, 0.25, 0.25]),
    (6, 6, [0.40, 0.25, 0.31]),
    (6, 7, [0.55, 0.25, 0.40]),
    (6, 8, [0.85, 0.25, 0.61]),
    (7, 1, [0.00, 0.00, 0.00]),
    (7, 2, [0.00, 0.00, 0.00]),
    (7, 3, [0.00, 0.00, 0.00]),
    (7, 4, [0.00, 0.00, 0.00]),
    (7, 5, [0.00, 0.00, 0.00]),
    (7, 6, [0.00, 0.00, 0.00]),
    (7, 7, [0.00, 0.00, 0.00]),
    (7, 8, [0.00, 0.00, 0.00]),
    (8, 1, [0.12, 0.12, 0.12]),
    (8, 2, [0.23, 0.12, 0.15]),
    (8, 3, [0.33, 0.12, 0.19]),
    (8, 4, [0.54, 0.12, 0.29]),
    (8, 5, [0.12, 0.12, 0.12]),
    (8, 6, [0.23, 0.12, 0.14]),
    (8, 7, [0.33, 0.12, 0.16]),
    (8, 8, [0.54, 0.12, 0.24]),
    (9, 1, [0.25, 0.25, 0.25]),
    (9, 2, [0.46, 0.25, 0.30]),
    (9, 3, [0.67, 0.25, 0.37]),
    (9, 4, [1.08, 0.25, 0.59]),
    (9, 5, [0.25, 0.25, 0.25]),
    (9, 6, [0.46, 0.25, 0.28]),
    (9, 7, [0.67, 0.25, 0.32]),
    (9, 8, [1.08, 0.25, 0.48]),
    (10, 1, [0.00, 0.00, 0.00]),
    (10, 2, [0.00, 0.00, 0.00]),
    (10, 3, [0.00, 0.00, 0.00]),
    (10, 4, [0.00, 0.00, 0.00]),
    (10, 5, [0.00, 0.00, 0.00]),
    (10, 6, [0.00, 0.00, 0.00]),
    (10, 7, [0.00, 0.00, 0.00]),
    (10, 8, [0.00, 0.00, 0.00]),
    (11, 1, [0.12, 0.12, 0.12]),
    (11, 2, [0.15, 0.12, 0.22]),
    (11, 3, [0.17, 0.12, 0.31]),
    (11, 4, [0.22, 0.12, 0.44]),
    (11, 5, [0.12, 0.12, 0.12]),
    (11, 6, [0.15, 0.12, 0.20]),
    (11, 7, [0.17, 0.12, 0.27]),
    (11, 8, [0.22, 0.12, 0.40]),
    (12, 1, [0.25, 0.25, 0.25]),
    (12, 2, [0.30, 0.25, 0.44]),
    (12, 3, [0.35, 0.25, 0.61]),
    (12, 4, [0.45, 0.25, 0.89]),
    (12, 5, [0.25, 0.25, 0.25]),
    (12, 6, [0.30, 0.25, 0.40]),
    (12, 7, [0.35, 0.25, 0.55]),
    (12, 8, [0.45, 0.25, 0.80]),
    (13, 1, [0.00, 0.00, 0.00]),
    (13, 2, [0.00, 0.00, 0.00]),
    (13, 3, [0.00, 0.00, 0.00]),
    (13, 4, [0.00, 0.00, 0.00]),
    (13, 5, [0.00, 0.00, 0.00]),
    (13, 6, [0.00, 0.00, 0.00]),
    (13, 7, [0.00, 0.00, 0.00]),
    (13, 8, [0.00, 0.00, 0.00]),
    (14, 1, [0.12, 0.12, 0.12]),
    (14, 2, [0.18, 0.12, 0.20]),
    (14, 3, [0.23, 0.12, 0.26]),
    (14, 4, [0.34, 0.12, 0.39]),
    (14, 5, [0.12, 0.12, 0.12]),
    (14, 6, [0.18, 0.12, 0.17]),
    (14, 7, [0.23, 0.12, 0.23]),
    (14, 8, [0.34, 0.12, 0.34]),
    (15, 1, [0.25, 0.25, 0.25]),
    (15, 2, [0.36, 0.25, 0.39]),
    (15, 3, [0.46, 0.25, 0.53]),
    (15, 4, [0.68, 0.25, 0.78]),
    (15, 5, [0.25, 0.25, 0.25]),
    (15, 6, [0.36, 0.25, 0.35]),
    (15, 7, [0.46, 0.25, 0.45]),
    (15, 8, [0.68, 0.25, 0.68]),
    (16, 1, [0.00, 0.00, 0.00]),
    (16, 2, [0.00, 0.00, 0.00]),
    (16, 3, [0.00, 0.00, 0.00]),
    (16, 4, [0.00, 0.00, 0.00]),
    (16, 5, [0.00, 0.00, 0.00]),
    (16, 6, [0.00, 0.00, 0.00]),
    (16, 7, [0.00, 0.00, 0.00]),
    (16, 8, [0.00, 0.00, 0.00]),
    (17, 1, [0.13, 0.12, 0.13]),
    (17, 2, [0.21, 0.12, 0.16]),
    (17, 3, [0.30, 0.12, 0.21]),
    (17, 4, [0.48, 0.12, 0.33]),
    (17, 5, [0.13, 0.12, 0.13]),
    (17, 6, [0.21, 0.12, 0.15]),
    (17, 7, [0.30, 0.12, 0.18]),
    (17, 8, [0.48, 0.12, 0.28]),
    (18, 1, [0.25, 0.25, 0.25]),
    (18, 2, [0.43, 0.25, 0.33]),
    (18, 3, [0.61, 0.25, 0.42]),
    (18, 4, [0.96, 0.25, 0.66]),
    (18, 5, [0.25, 0.25, 0.25]),
    (18, 6, [0.43, 0.25, 0.29]),
    (18, 7, [0.61, 0.25, 0.36]),
    (18, 8, [0.96, 0.25, 0.55]),
];

pub const BIAS: [(u32, u32, [f64; 3]); 144] = [
    (1, 1, [0.00, 0.00, 0.01]),
    (1, 2, [0.00, 0.00, 0.01]),
    (1, 3, [-0.01, 0.00, 0.01]),
    (1, 4, [-0.13, -0.10, 0.01]),
    (1, 5, [0.00, 0.00, 0.01]),
    (1, 6, [0.03, 0.07, 0.01]),
    (1, 7, [0.06, 0.13, 0.01]),
    (1, 8, [0.01, 0.11, 0.01]),
    (2, 1, [-0.01, 0.00, 0.01]),
    (2, 2, [-0.01, 0.00, 0.01]),
    (2, 3, [-0.01, 0.00, 0.01]),
    (2, 4, [-0.15, -0.10, 0.01]),
    (2, 5, [-0.01, 0.01, 0.01]),
    (2, 6, [0.02, 0.07, 0.02]),
    (2, 7, [0.04, 0.13, 0.02]),
    (2, 8, [-0.04, 0.11, 0.02]),
    (3, 1, [-0.01, 0.00, 0.01]),
    (3, 2, [-0.01, 0.00, 0.01]),
    (3, 3, [-0.01, 0.00, 0.01]),
    (3, 4, [-0.17, -0.10, 0.01]),
    (3, 5, [-0.01, 0.01, 0.01]),
    (3, 6, [0.01, 0.07, 0.03]),
    (3, 7, [0.02, 0.13, 0.04]),
    (3, 8, [-0.10, 0.11, 0.04]),
    (4, 1, [0.00, 0.00, 0.01]),
    (4, 2, [0.00, 0.00, 0.01]),
    (4, 3, [0.00, -0.01, 0.00]),
    (4, 4, [-0.14, -0.09, 0.00]),
    (4, 5, [0.00, 0.00, 0.01]),
    (4, 6, [-0.03, 0.06, 0.01]),
    (4, 7, [-0.04, 0.12, 0.00]),
    (4, 8, [-0.11, 0.19, 0.00]),
    (5, 1, [0.00, 0.00, 0.01]),
    (5, 2, [0.00, 0.00, 0.01]),
    (5, 3, [-0.01, -0.01, 0.00]),
    (5, 4, [-0.18, -0.09, 0.00]),
    (5, 5, [0.00, 0.00, 0.01]),
    (5, 6, [-0.04, 0.06, 0.01]),
    (5, 7, [-0.08, 0.12, 0.02]),
    (5, 8, [-0.21, 0.19, 0.01]),
    (6, 1, [0.00, 0.00, 0.01]),
    (6, 2, [0.00, 0.00, 0.01]),
    (6, 3, [-0.01, -0.01, 0.00]),
    (6, 4, [-0.22, -0.10, 0.00]),
    (6, 5, [0.00, 0.00, 0.01]),
    (6, 6, [-0.06, 0.06, 0.02]),
    (6, 7, [-0.12, 0.12, 0.03]),
    (6, 8, [-0.31, 0.19, 0.03]),
    (7, 1, [0.00, 0.00, -0.01]),
    (7, 2, [0.00, 0.00, -0.01]),
    (7, 3, [-0.01, 0.00, -0.01]),
    (7, 4, [-0.19, -0.05, -0.02]),
    (7, 5, [0.00, 0.00, -0.01]),
    (7, 6, [-0.10, 0.03, -0.01]),
    (7, 7, [-0.20, 0.08, -0.01]),
    (7, 8, [-0.40, 0.21, -0.01]),
    (8, 1, [0.00, 0.00, -0.01]),
    (8, 2, [0.00, 0.00, -0.01]),
    (8, 3, [-0.01, 0.00, -0.01]),
    (8, 4, [-0.24, -0.05, -0.02]),
    (8, 5, [0.00, 0.00, -0.01]),
    (8, 6, [-0.14, 0.03, -0.01]),
    (8, 7, [-0.26, 0.08, 0.00]),
    (8, 8, [-0.53, 0.21, 0.00]),
    (9, 1, [0.00, 0.00, -0.01]),
    (9, 2, [0.00, 0.00, -0.01]),
    (9, 3, [-0.01, 0.00, -0.01]),
    (9, 4, [-0.29, -0.05, -0.02]),
    (9, 5, [0.00, 0.00, -0.01]),
    (9, 6, [-0.17, 0.03, 0.00]),
    (9, 7, [-0.32, 0.08, 0.00]),
    (9, 8, [-0.67, 0.21, 0.01]),
    (10, 1, [0.00, 0.00, 0.01]),
    (10, 2, [0.00, 0.00, 0.01]),
    (10, 3, [-0.01, -0.02, 0.01]),
    (10, 4, [-0.16, -0.17, 0.01]),
    (10, 5, [0.00, 0.00, 0.01]),
    (10, 6, [0.06, 0.08, 0.01]),
    (10, 7, [0.10, 0.12, 0.01]),
    (10, 8, [0.00, 0.03, 0.01]),
    (11, 1, [0.00, 0.00, 0.01]),
    (11, 2, [0.00, 0.00, 0.01]),
    (11, 3, [-0.01, -0.02, 0.01]),
    (11, 4, [-0.17, -0.17, 0.01]),
    (11, 5, [0.00, 0.00, 0.01]),
    (11, 6, [0.06, 0.08, 0.02]),
    (11, 7, [0.09, 0.12, 0.02]),
    (11, 8, [-0.02, 0.03, 0.02]),
    (12, 1, [0.00, 0.00, 0.01]),
    (12, 2, [0.00, 0.00, 0.01]),
    (12, 3, [-0.01, -0.02, 0.01]),
    (12, 4, [-0.18, -0.17, 0.00]),
    (12, 5, [0.00, 0.00, 0.01]),
    (12, 6, [0.06, 0.08, 0.03]),
    (12, 7, [0.09, 0.12, 0.04]),
    (12, 8, [-0.05, 0.03, 0.03]),
    (13, 1, [0.00, 0.00, 0.01]),
    (13, 2, [0.00, 0.00, 0.01]),
    (13, 3, [0.00, -0.01, 0.01]),
    (13, 4, [-0.14, -0.15, 0.01]),
    (13, 5, [0.00, 0.01, 0.01]),
    (13, 6, [0.03, 0.09, 0.01]),
    (13, 7, [0.05, 0.16, 0.01]),
    (13, 8, [0.00, 0.15, 0.01]),
    (14, 1, [0.00, 0.00, 0.01]),
    (14, 2, [0.00, 0.00, 0.01]),
    (14, 3, [0.00, -0.01, 0.01]),
    (14, 4, [-0.16, -0.15, 0.01]),
    (14, 5, [0.00, 0.00, 0.01]),
    (14, 6, [0.02, 0.09, 0.02]),
    (14, 7, [0.02, 0.16, 0.02]),
    (14, 8, [-0.07, 0.15, 0.02]),
    (15, 1, [0.00, 0.00, 0.01]),
    (15, 2, [0.00, 0.00, 0.01]),
    (15, 3, [0.00, -0.01, 0.01]),
    (15, 4, [-0.18, -0.15, 0.01]),
    (15, 5, [0.00, 0.00, 0.01]),
    (15, 6, [0.01, 0.09, 0.03]),
    (15, 7, [0.00, 0.16, 0.04]),
    (15, 8, [-0.14, 0.15, 0.03]),
    (16, 1, [0.00, 0.00, 0.00]),
    (16, 2, [0.00, 0.00, 0.00]),
    (16, 3, [0.00, 0.00, 0.00]),
    (16, 4, [-0.11, -0.08, 0.00]),
    (16, 5, [0.00, 0.00, 0.00]),
    (16, 6, [-0.07, 0.06, 0.00]),
    (16, 7, [-0.13, 0.12, 0.00]),
    (16, 8, [-0.23, 0.23, 0.00]),
    (17, 1, [0.00, 0.00, 0.00]),
    (17, 2, [0.00, 0.00, 0.00]),
    (17, 3, [0.00, 0.00, 0.00]),
    (17, 4, [-0.14, -0.08, 0.00]),
    (17, 5, [0.00, 0.00, 0.00]),
    (17, 6, [-0.09, 0.06, 0.01]),
    (17, 7, [-0.17, 0.12, 0.01]),
    (17, 8, [-0.34, 0.23, 0.01]),
    (18, 1, [0.00, 0.00, 0.00]),
    (18, 2, [0.00, 0.00, 0.00]),
    (18, 3, [-0.01, 0.00, 0.00]),
    (18, 4, [-0.18, -0.08, 0.00]),
    (18, 5, [0.00, 0.00, 0.00]),
    (18, 6, [-0.12, 0.06, 0.01]),
    (18, 7, [-0.22, 0.12, 0.02]),
    (18, 8, [-0.45, 0.23, 0.02]),
];

//! The twenty census quadruples, one per transversal type `(rho, sigma)`.

use crate::error::Result;
use crate::pencil::QPencil;

pub struct CensusEntry {
    pub rho: usize,
    pub sigma: usize,
    pub matrices: [[[i64; 4]; 4]; 4],
}

impl CensusEntry {
    pub fn label(&self) -> (usize, usize) {
        (self.rho, self.sigma)
    }

    pub fn pencil(&self) -> Result<QPencil> {
        QPencil::from_ints(self.matrices)
    }
}

pub fn entry(rho: usize, sigma: usize) -> Option<&'static CensusEntry> {
    CENSUS.iter().find(|e| e.rho == rho && e.sigma == sigma)
}

pub const CENSUS: [CensusEntry; 20] = [
    CensusEntry {
        rho: 2,
        sigma: 2,
        matrices: [
            [
                [3, 4, 1, -4],
                [4, 14, -6, -10],
                [1, -6, 9, 2],
                [-4, -10, 2, 8],
            ],
            [[11, 0, 2, 2], [0, 6, -1, 4], [2, -1, 6, 2], [2, 4, 2, 4]],
            [
                [17, -3, 2, 9],
                [-3, 6, -4, 1],
                [2, -4, 13, 10],
                [9, 1, 10, 17],
            ],
            [
                [9, -3, 9, 3],
                [-3, 10, 6, -7],
                [9, 6, 18, -3],
                [3, -7, -3, 5],
            ],
        ],
    },
    CensusEntry {
        rho: 4,
        sigma: 4,
        matrices: [
            [[18, 3, 9, 6], [3, 5, -1, -3], [9, -1, 13, 7], [6, -3, 7, 6]],
            [
                [17, -10, 4, 3],
                [-10, 14, -1, -3],
                [4, -1, 5, -4],
                [3, -3, -4, 6],
            ],
            [
                [8, 6, 10, 10],
                [6, 18, 6, 15],
                [10, 6, 14, 9],
                [10, 15, 9, 22],
            ],
            [[8, -4, 8, 0], [-4, 10, -4, 0], [8, -4, 8, 0], [0, 0, 0, 0]],
        ],
    },
    CensusEntry {
        rho: 6,
        sigma: 6,
        matrices: [
            [[10, 8, 2, 6], [8, 14, 0, 2], [2, 0, 5, 7], [6, 2, 7, 11]],
            [
                [11, -6, 10, 9],
                [-6, 10, -5, -5],
                [10, -5, 14, 11],
                [9, -5, 11, 9],
            ],
            [[6, 2, 6, -5], [2, 9, 2, 0], [6, 2, 6, -5], [-5, 0, -5, 5]],
            [[8, 6, 2, -2], [6, 9, 9, 6], [2, 9, 13, 12], [-2, 6, 12, 13]],
        ],
    },
    CensusEntry {
        rho: 8,
        sigma: 8,
        matrices: [
            [
                [5, 3, -3, -4],
                [3, 6, -3, -2],
                [-3, -3, 6, 4],
                [-4, -2, 4, 4],
            ],
            [
                [19, 10, 12, 17],
                [10, 14, 10, 7],
                [12, 10, 10, 11],
                [17, 7, 11, 17],
            ],
            [
                [5, 1, 3, -3],
                [1, 5, -7, -1],
                [3, -7, 22, 7],
                [-3, -1, 7, 10],
            ],
            [[1, 1, 0, 2], [1, 1, 0, 2], [0, 0, 4, 4], [2, 2, 4, 8]],
        ],
    },
    CensusEntry {
        rho: 10,
        sigma: 10,
        matrices: [
            [
                [18, 6, 6, -6],
                [6, 2, 2, -2],
                [6, 2, 2, -2],
                [-6, -2, -2, 4],
            ],
            [
                [4, -6, 6, 4],
                [-6, 13, -9, -8],
                [6, -9, 9, 6],
                [4, -8, 6, 5],
            ],
            [[1, 0, -3, 0], [0, 4, 0, 6], [-3, 0, 9, 0], [0, 6, 0, 9]],
            [
                [9, -3, 0, 0],
                [-3, 10, 9, -6],
                [0, 9, 9, -6],
                [0, -6, -6, 4],
            ],
        ],
    },
    CensusEntry {
        rho: 2,
        sigma: 0,
        matrices: [
            [
                [20, 6, -14, -4],
                [6, 18, 3, -12],
                [-14, 3, 17, -2],
                [-4, -12, -2, 8],
            ],
            [
                [54, -27, 16, 12],
                [-27, 18, -2, -15],
                [16, -2, 20, -10],
                [12, -15, -10, 21],
            ],
            [
                [42, -8, 9, -3],
                [-8, 10, 5, -11],
                [9, 5, 29, 7],
                [-3, -11, 7, 29],
            ],
            [
                [0, 9, 3, -3],
                [9, -9, -6, 6],
                [3, -6, -3, 3],
                [-3, 6, 3, -3],
            ],
        ],
    },
    CensusEntry {
        rho: 4,
        sigma: 2,
        matrices: [
            [[9, -4, 1, 1], [-4, 5, -3, -2], [1, -3, 3, 1], [1, -2, 1, 1]],
            [[6, 1, 3, 4], [1, 5, 5, 2], [3, 5, 6, 2], [4, 2, 2, 8]],
            [[8, 2, -6, 4], [2, 5, 1, 3], [-6, 1, 6, -2], [4, 3, -2, 3]],
            [[-4, 4, -2, 2], [4, 0, 0, -2], [-2, 0, 0, 1], [2, -2, 1, -1]],
        ],
    },
    CensusEntry {
        rho: 6,
        sigma: 4,
        matrices: [
            [[6, -1, 5, 5], [-1, 2, 1, -3], [5, 1, 6, 2], [5, -3, 2, 9]],
            [
                [5, -5, 5, -3],
                [-5, 6, -5, 5],
                [5, -5, 5, -3],
                [-3, 5, -3, 9],
            ],
            [[6, -3, 5, 2], [-3, 5, -3, 2], [5, -3, 9, -4], [2, 2, -4, 9]],
            [[0, -2, -2, 0], [-2, 1, 2, 1], [-2, 2, 3, 1], [0, 1, 1, 0]],
        ],
    },
    CensusEntry {
        rho: 8,
        sigma: 6,
        matrices: [
            [[4, 0, 4, -2], [0, 5, -2, 5], [4, -2, 8, -4], [-2, 5, -4, 6]],
            [
                [2, 3, -1, -1],
                [3, 6, -1, -4],
                [-1, -1, 6, -3],
                [-1, -4, -3, 6],
            ],
            [[6, 2, 0, 1], [2, 8, 4, -2], [0, 4, 8, -2], [1, -2, -2, 1]],
            [[2, -3, 0, 1], [-3, 5, 0, 0], [0, 0, 0, 0], [1, 0, 0, 5]],
        ],
    },
    CensusEntry {
        rho: 10,
        sigma: 8,
        matrices: [
            [
                [5, -1, -1, 4],
                [-1, 6, -3, 5],
                [-1, -3, 2, -4],
                [4, 5, -4, 9],
            ],
            [[8, 0, 0, -4], [0, 1, 0, -1], [0, 0, 2, 0], [-4, -1, 0, 3]],
            [[6, 5, 1, -2], [5, 9, -3, -4], [1, -3, 6, 4], [-2, -4, 4, 4]],
            [[8, 0, 0, -4], [0, 8, 4, 4], [0, 4, 2, 2], [-4, 4, 2, 4]],
        ],
    },
    CensusEntry {
        rho: 4,
        sigma: 0,
        matrices: [
            [
                [21, 10, 1, -6],
                [10, 10, 0, -1],
                [1, 0, 2, -3],
                [-6, -1, -3, 6],
            ],
            [[0, 6, -6, 2], [6, 3, 0, -4], [-6, 0, -3, 5], [2, -4, 5, -3]],
            [[0, 0, 0, 2], [0, 0, 0, -1], [0, 0, 0, -1], [2, -1, -1, 5]],
            [
                [0, 3, -1, 1],
                [3, -3, 8, -5],
                [-1, 8, -5, 4],
                [1, -5, 4, -3],
            ],
        ],
    },
    CensusEntry {
        rho: 6,
        sigma: 2,
        matrices: [
            [[7, -1, 5, 2], [-1, 5, -1, 5], [5, -1, 4, 1], [2, 5, 1, 7]],
            [
                [-1, -2, 1, -2],
                [-2, -3, 2, -6],
                [1, 2, -1, 2],
                [-2, -6, 2, 0],
            ],
            [[4, 4, 2, -2], [4, 0, 4, -2], [2, 4, 0, -1], [-2, -2, -1, 1]],
            [
                [-1, 1, 2, 1],
                [1, -1, -2, -1],
                [2, -2, -3, -1],
                [1, -1, -1, 0],
            ],
        ],
    },
    CensusEntry {
        rho: 8,
        sigma: 4,
        matrices: [
            [
                [16, -4, -16, 10],
                [-4, 18, 0, -13],
                [-16, 0, 20, -9],
                [10, -13, -9, 19],
            ],
            [[0, 1, -1, 0], [1, -5, 6, 1], [-1, 6, -7, -1], [0, 1, -1, 0]],
            [
                [0, -16, 0, -8],
                [-16, 0, 16, -16],
                [0, 16, 0, 8],
                [-8, -16, 8, -16],
            ],
            [
                [7, 9, 16, 3],
                [9, -9, -12, 9],
                [16, -12, -15, 15],
                [3, 9, 15, 0],
            ],
        ],
    },
    CensusEntry {
        rho: 10,
        sigma: 6,
        matrices: [
            [
                [18, -13, 15, 1],
                [-13, 22, 2, -16],
                [15, 2, 30, -20],
                [1, -16, -20, 30],
            ],
            [
                [-15, 7, 8, 5],
                [7, -3, -4, -3],
                [8, -4, -4, -2],
                [5, -3, -2, 0],
            ],
            [
                [1, 0, 1, -3],
                [0, 0, 0, 0],
                [1, 0, -8, -15],
                [-3, 0, -15, -7],
            ],
            [[-15, 0, -6, 2], [0, 15, 6, 8], [-6, 6, 0, 4], [2, 8, 4, 4]],
        ],
    },
    CensusEntry {
        rho: 6,
        sigma: 0,
        matrices: [
            [
                [3, 6, -4, -4],
                [6, 13, -5, -5],
                [-4, -5, 19, 20],
                [-4, -5, 20, 23],
            ],
            [[0, -1, -3, 0], [-1, 3, 6, 0], [-3, 6, 9, 0], [0, 0, 0, 0]],
            [[8, 2, -2, 2], [2, -4, -2, 2], [-2, -2, 0, 0], [2, 2, 0, 0]],
            [
                [1, -2, 1, 3],
                [-2, -5, -11, -15],
                [1, -11, -8, -6],
                [3, -15, -6, 0],
            ],
        ],
    },
    CensusEntry {
        rho: 8,
        sigma: 2,
        matrices: [
            [[3, -3, 3, -1], [-3, 4, -3, 2], [3, -3, 5, 0], [-1, 2, 0, 2]],
            [[-1, 1, -1, -2], [1, 0, 0, 0], [-1, 0, 0, 0], [-2, 0, 0, 0]],
            [[0, 0, -1, -2], [0, 0, 0, 0], [-1, 0, 1, 0], [-2, 0, 0, -4]],
            [[-1, 1, 1, 0], [1, 3, -1, 2], [1, -1, -1, 0], [0, 2, 0, 1]],
        ],
    },
    CensusEntry {
        rho: 10,
        sigma: 4,
        matrices: [
            [[5, -1, -3, 1], [-1, 2, 2, 0], [-3, 2, 4, -1], [1, 0, -1, 3]],
            [
                [0, 0, 0, 0],
                [0, -4, -4, -2],
                [0, -4, -4, -2],
                [0, -2, -2, 0],
            ],
            [
                [0, 4, -4, -6],
                [4, 0, 2, 1],
                [-4, 2, -4, -4],
                [-6, 1, -4, -3],
            ],
            [
                [-3, 0, -1, -2],
                [0, 0, 0, 0],
                [-1, 0, 0, -1],
                [-2, 0, -1, -1],
            ],
        ],
    },
    CensusEntry {
        rho: 8,
        sigma: 0,
        matrices: [
            [
                [9, 0, -7, -10],
                [0, 5, 0, 2],
                [-7, 0, 15, 5],
                [-10, 2, 5, 13],
            ],
            [
                [8, 6, 5, 8],
                [6, -8, -5, -4],
                [5, -5, -3, -2],
                [8, -4, -2, 0],
            ],
            [[8, 4, 11, 4], [4, 0, 10, 0], [11, 10, 5, 10], [4, 0, 10, 0]],
            [[-4, -4, 2, 4], [-4, -4, 2, 4], [2, 2, 0, 0], [4, 4, 0, 0]],
        ],
    },
    CensusEntry {
        rho: 10,
        sigma: 2,
        matrices: [
            [
                [29, -22, 4, -4],
                [-22, 26, -7, 5],
                [4, -7, 25, -6],
                [-4, 5, -6, 5],
            ],
            [
                [-1, -4, -1, -4],
                [-4, -12, -4, -14],
                [-1, -4, -1, -4],
                [-4, -14, -4, -15],
            ],
            [[-5, 9, 6, 7], [9, 8, -2, 5], [6, -2, -4, -2], [7, 5, -2, 3]],
            [
                [-5, 16, -1, -10],
                [16, -12, 20, 4],
                [-1, 20, 7, -14],
                [-10, 4, -14, 0],
            ],
        ],
    },
    CensusEntry {
        rho: 10,
        sigma: 0,
        matrices: [
            [
                [51, -34, 5, 60],
                [-34, 147, 30, -37],
                [5, 30, 99, 40],
                [60, -37, 40, 135],
            ],
            [
                [15, 97, 64, 36],
                [97, -13, -50, 76],
                [64, -50, -63, 40],
                [36, 76, 40, 48],
            ],
            [
                [-27, 45, -27, 51],
                [45, 0, -30, 10],
                [-27, -30, 48, -44],
                [51, 10, -44, 24],
            ],
            [
                [-60, 30, 10, -52],
                [30, 45, -55, -2],
                [10, -55, 40, 32],
                [-52, -2, 32, -32],
            ],
        ],
    },
];

import numpy as np
import pytest

from melorig.transitions import CountMatrix

# Reference two-note transition counts from a 428-piece piano corpus
# (rows = first note, C..B).
REFERENCE_COUNTS = [
    [48706, 9549, 15741, 21873, 17435, 19708, 5615, 16120, 12433, 15017, 16698, 12510],
    [10160, 31841, 12319, 10850, 17553, 12916, 12180, 5707, 12410, 10115, 12691, 11700],
    [17350, 11410, 51685, 11681, 16920, 23252, 14940, 20143, 6316, 15870, 15685, 14720],
    [16645, 12437, 11874, 38206, 9379, 13576, 14856, 15827, 16686, 7023, 15041, 8077],
    [12539, 13427, 17953, 8298, 38359, 12902, 12134, 21184, 13355, 20445, 6111, 13862],
    [15191, 10801, 17276, 15191, 14300, 46562, 8249, 15828, 17335, 16654, 19602, 6221],
    [5734, 10903, 10477, 12231, 13489, 8066, 30101, 10727, 10150, 18456, 9809, 13346],
    [20957, 6371, 15137, 13084, 15632, 17591, 10659, 48778, 9961, 15464, 19816, 14701],
    [16340, 13814, 6615, 14083, 10312, 13832, 11161, 10080, 32128, 11051, 10538, 14397],
    [20344, 13638, 21398, 7166, 15723, 12624, 14360, 16294, 10742, 49846, 12608, 14166],
    [14466, 14997, 20376, 16563, 6073, 15138, 8586, 16744, 12694, 12486, 48808, 7463],
    [12741, 9849, 19341, 10338, 17018, 6227, 10925, 10433, 11288, 15326, 6886, 31510],
]

# Reference row-normalized matrix, rounded to 4 decimals.
REFERENCE_PROBS = [
    [0.2304, 0.0452, 0.0745, 0.1035, 0.0825, 0.0932, 0.0266, 0.0763, 0.0588, 0.071, 0.079, 0.0592],
    [0.0633, 0.1985, 0.0768, 0.0676, 0.1094, 0.0805, 0.0759, 0.0356, 0.0773, 0.063, 0.0791, 0.0729],
    [0.0789, 0.0519, 0.235, 0.0531, 0.0769, 0.1057, 0.0679, 0.0916, 0.0287, 0.0721, 0.0713, 0.0669],
    [0.0927, 0.0692, 0.0661, 0.2127, 0.0522, 0.0756, 0.0827, 0.0881, 0.0929, 0.0391, 0.0837, 0.045],
    [0.0658, 0.0705, 0.0942, 0.0435, 0.2013, 0.0677, 0.0637, 0.1112, 0.0701, 0.1073, 0.0321, 0.0727],
    [0.0748, 0.0532, 0.085, 0.0748, 0.0704, 0.2291, 0.0406, 0.0779, 0.0853, 0.082, 0.0965, 0.0306],
    [0.0374, 0.071, 0.0683, 0.0797, 0.0879, 0.0526, 0.1961, 0.0699, 0.0661, 0.1202, 0.0639, 0.087],
    [0.1007, 0.0306, 0.0727, 0.0629, 0.0751, 0.0845, 0.0512, 0.2343, 0.0479, 0.0743, 0.0952, 0.0706],
    [0.0994, 0.0841, 0.0402, 0.0857, 0.0627, 0.0842, 0.0679, 0.0613, 0.1955, 0.0672, 0.0641, 0.0876],
    [0.0974, 0.0653, 0.1024, 0.0343, 0.0753, 0.0604, 0.0687, 0.078, 0.0514, 0.2386, 0.0604, 0.0678],
    [0.0744, 0.0771, 0.1048, 0.0852, 0.0312, 0.0779, 0.0442, 0.0861, 0.0653, 0.0642, 0.2511, 0.0384],
    [0.0787, 0.0608, 0.1195, 0.0639, 0.1051, 0.0385, 0.0675, 0.0644, 0.0697, 0.0947, 0.0425, 0.1946],
]


@pytest.fixture
def ref_counts():
    return CountMatrix(np.array(REFERENCE_COUNTS, dtype=np.int64))


@pytest.fixture
def ref_probs():
    return np.array(REFERENCE_PROBS)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

"""
Reference Tables - Published code lengths used to compare greedy constructions

Lengths are in bits; codes over Z4 count two bits per symbol. Column "B" holds the
best known binary codes, the other columns greedy constructions:
"2" binary, "2RI2" binary RI for BPSK, "2NC4" binary robust to non-coherent QPSK,
"4" over Z4, "4RI4" over Z4 RI for QPSK.
"""

from typing import Dict, Optional, Tuple

TARGETS: Tuple[int, ...] = (2, 4, 10, 20, 30, 50)
COLUMNS: Tuple[str, ...] = ("B", "2", "2RI2", "2NC4", "4", "4RI4")

# K -> lengths per target d_min (2, 4, 10), then per column
_SINGLE_RUN_LOW = {
    2: ((3, 3, 4, 4, 4, 4), (6, 6, 8, 8, 6, 8), (15, 15, 20, 20, 16, 20)),
    3: ((4, 4, 4, 4, 6, 4), (7, 7, 8, 8, 8, 8), (18, 18, 20, 20, 20, 20)),
    4: ((5, 5, 6, 6, 6, 6), (8, 9, 9, 8, 10, 8), (20, 20, 22, 22, 22, 22)),
    5: ((6, 6, 6, 7, 8, 8), (10, 10, 10, 11, 10, 12), (21, 22, 22, 23, 24, 24)),
    6: ((7, 7, 8, 8, 8, 8), (11, 11, 12, 12, 14, 14), (23, 23, 24, 24, 26, 24)),
    7: ((8, 8, 8, 8, 10, 10), (12, 12, 14, 14, 16, 14), (24, 25, 26, 26, 28, 28)),
    8: ((9, 9, 10, 10, 10, 10), (13, 14, 14, 14, 16, 16), (26, 27, 28, 28, 30, 30)),
    9: ((10, 10, 10, 11, 12, 12), (14, 15, 16, 16, 18, 16), (27, 28, 28, 30, 32, 32)),
    10: ((11, 11, 12, 12, 12, 12), (15, 16, 18, 16, 18, 18), (28, 30, 30, 31, 34, 34)),
    11: ((12, 12, 12, 12, 14, 14), (16, 17, 18, 18, 20, 18), (30, 31, 32, 32, 38, 36)),
    12: ((13, 13, 14, 14, 14, 14), (18, 18, 18, 19, 20, 20), (31, 33, 34, 34, 36, 36)),
    13: ((14, 14, 14, 15, 16, 16), (19, 19, 20, 20, 22, 22), (32, 35, 36, 36, 38, 38)),
    14: ((15, 15, 16, 16, 16, 16), (20, 20, 21, 20, 24, 24), (34, 35, 36, 36, 42, 40)),
}

# K -> lengths per target d_min (20, 30, 50), then per column
_SINGLE_RUN_HIGH = {
    2: ((30, 30, 40, 40, 30, 40), (45, 45, 60, 60, 46, 60), (75, 75, 100, 100, 76, 100)),
    3: ((35, 35, 40, 40, 36, 40), (53, 53, 60, 60, 54, 60), (88, 88, 100, 100, 88, 100)),
    4: ((38, 39, 40, 40, 40, 40), (57, 57, 62, 62, 60, 62), (95, 95, 102, 102, 96, 102)),
    5: ((40, 41, 42, 43, 42, 44), (59, 61, 62, 63, 62, 64), (99, 100, 102, 103, 104, 104)),
    6: ((42, 43, 44, 44, 46, 46), (60, 63, 66, 64, 68, 64), (101, 103, 104, 104, 110, 106)),
    7: ((43, 45, 46, 47, 48, 50), (62, 66, 66, 64, 70, 70), (102, 107, 106, 108, 112, 110)),
    8: ((45, 49, 50, 48, 52, 52), (65, 69, 71, 68, 76, 72), (105, 110, 110, 110, 118, 112)),
    9: ((47, 50, 50, 52, 54, 54), (67, 71, 72, 72, 74, 72), (107, 112, 114, 115, 118, 116)),
    10: ((48, 52, 54, 54, 56, 56), (68, 74, 76, 76, 80, 78), (109, 116, 118, 118, 122, 120)),
    11: ((50, 55, 54, 56, 62, 56), (70, 77, 78, 78, 84, 80), (113, 120, 120, 120, 128, 126)),
    12: ((52, 56, 56, 58, 64, 60), (72, 78, 80, 80, 86, 84), (116, 122, 124, 124, 130, 128)),
    13: ((53, 58, 60, 60, 62, 64), (74, 80, 82, 84, 88, 86), (118, 124, 126, 127, 134, 130)),
    14: ((54, 60, 60, 60, 62, 64), (76, 82, 84, 84, 88, 88), (119, 128, 128, 128, 134, 130)),
}

# Best of 100 runs
_BEST_OF_100_LOW = {
    2: ((3, 3, 4, 4, 4, 4), (6, 6, 8, 8, 6, 8), (15, 15, 20, 20, 16, 20)),
    3: ((4, 4, 4, 4, 4, 4), (7, 7, 8, 8, 8, 8), (18, 18, 20, 20, 18, 20)),
    4: ((5, 5, 6, 6, 6, 6), (8, 9, 8, 8, 10, 8), (20, 20, 22, 22, 22, 22)),
    5: ((6, 6, 6, 7, 6, 8), (10, 10, 10, 11, 10, 12), (21, 21, 22, 23, 22, 24)),
    6: ((7, 7, 8, 8, 8, 8), (11, 11, 12, 12, 12, 12), (23, 23, 24, 24, 24, 24)),
    7: ((8, 8, 8, 8, 8, 8), (12, 12, 13, 13, 12, 14), (24, 25, 26, 26, 26, 26)),
    8: ((9, 9, 10, 10, 10, 10), (13, 14, 14, 14, 14, 16), (26, 26, 28, 28, 28, 28)),
    9: ((10, 10, 10, 11, 10, 12), (14, 15, 15, 15, 14, 16), (27, 28, 28, 28, 30, 28)),
    10: ((11, 11, 12, 12, 12, 12), (15, 16, 16, 16, 18, 16), (28, 29, 30, 30, 32, 30)),
}

_BEST_OF_100_HIGH = {
    2: ((30, 30, 40, 40, 30, 40), (45, 45, 60, 60, 46, 60), (75, 75, 100, 100, 76, 100)),
    3: ((35, 35, 40, 40, 36, 40), (53, 53, 60, 60, 54, 60), (88, 88, 100, 100, 88, 100)),
    4: ((38, 38, 40, 40, 38, 40), (57, 57, 62, 62, 58, 62), (95, 95, 102, 102, 96, 102)),
    5: ((40, 40, 42, 43, 42, 44), (59, 59, 62, 62, 60, 62), (99, 99, 102, 103, 100, 104)),
    6: ((42, 42, 44, 44, 44, 44), (60, 62, 62, 62, 64, 62), (101, 102, 104, 104, 104, 104)),
    7: ((43, 45, 44, 46, 46, 46), (62, 65, 64, 64, 68, 62), (102, 105, 106, 106, 108, 106)),
    8: ((45, 47, 48, 48, 50, 48), (65, 68, 68, 68, 70, 68), (105, 109, 108, 108, 114, 110)),
    9: ((47, 49, 50, 51, 52, 52), (67, 70, 72, 72, 74, 72), (107, 112, 114, 114, 116, 114)),
    10: ((48, 51, 52, 52, 54, 52), (68, 73, 74, 74, 78, 76), (109, 115, 116, 116, 120, 118)),
}

# constellation -> SNR dB -> (required d_min, coherent length, non-coherent length)
# at FER 1e-8 and K = 8; lengths in symbols
TABLE3: Dict[str, Dict[int, Tuple[int, int, int]]] = {
    "bpsk": {0: (22, 51, 54), 5: (7, 21, 22), 10: (3, 13, 14)},
    "qpsk": {0: (43, 50, 52), 5: (14, 19, 20), 10: (5, 9, 10)},
}
TABLE3_K = 8
TABLE3_FER = 1e-8


def _merge(low, high) -> Dict[Tuple[int, int, str], int]:
    table = {}
    for K in low:
        for blocks, targets in ((low[K], TARGETS[:3]), (high[K], TARGETS[3:])):
            for d_min, lengths in zip(targets, blocks):
                for column, length in zip(COLUMNS, lengths):
                    table[(K, d_min, column)] = length
    return table


SINGLE_RUN = _merge(_SINGLE_RUN_LOW, _SINGLE_RUN_HIGH)
BEST_OF_100 = _merge(_BEST_OF_100_LOW, _BEST_OF_100_HIGH)


def published_length(K: int, d_min: int, column: str, best_of_100: bool = False) -> Optional[int]:
    """Published length in bits, or None when the table has no such cell"""
    table = BEST_OF_100 if best_of_100 else SINGLE_RUN
    return table.get((K, d_min, column))


def published_ks(best_of_100: bool = False) -> Tuple[int, ...]:
    return tuple(sorted((_BEST_OF_100_LOW if best_of_100 else _SINGLE_RUN_LOW).keys()))

"""Experiment grids for the reference coverage tables, with the reference numbers.

Each preset is a list of cells; a cell is a DGP plus the reference coverage
(percent at 90/95/99%) for every method. ``compare`` lines an observed report
up against a cell.
"""

from dataclasses import dataclass

from fdcv.sim import DgpSpec, relative_efficiency

METHODS = ("CV_C", "CV_AR", "CV_PZ", "AM-PW", "NW-PW")


@dataclass(frozen=True)
class Cell:
    dgp: DgpSpec
    reference: dict  # method -> (90%, 95%, 99%) in percent
    c: float = 0.8


def _cells(make, rows):
    # rows: key -> {n: five triples in METHODS order}
    out = []
    for key, by_n in rows.items():
        for n, triples in by_n.items():
            out.append(Cell(make(key, n), dict(zip(METHODS, triples))))
    return out


_AR1 = {
    0.1: {50: [(86.7, 91.9, 97.4), (86.7, 91.9, 97.4), (87.2, 92.5, 97.8), (87.7, 93.1, 97.7), (85.3, 90.8, 96.4)],
          200: [(87.3, 93.1, 98.3), (87.8, 93.3, 98.3), (86.9, 92.7, 98.4), (89.6, 94.8, 99.0), (88.4, 94.2, 98.8)]},
    0.3: {50: [(81.5, 88.7, 94.9), (82.1, 88.6, 94.6), (80.6, 87.9, 95.2), (86.5, 92.0, 97.2), (85.2, 90.6, 96.3)],
          200: [(85.2, 91.3, 97.2), (87.3, 92.8, 97.8), (81.2, 88.0, 95.7), (89.6, 94.6, 98.9), (88.6, 94.1, 98.8)]},
    0.5: {50: [(79.1, 85.3, 92.8), (80.3, 86.2, 92.8), (76.3, 82.9, 91.6), (85.4, 90.6, 96.3), (84.4, 89.9, 95.7)],
          200: [(84.7, 91.0, 96.7), (87.9, 93.1, 97.7), (77.3, 84.4, 92.9), (89.0, 94.1, 98.8), (88.5, 93.8, 98.7)]},
    0.7: {50: [(75.1, 81.8, 89.9), (79.2, 84.5, 90.9), (68.7, 76.7, 87.3), (82.7, 88.1, 94.3), (81.8, 87.5, 94.0)],
          200: [(85.0, 90.5, 96.6), (87.5, 92.6, 97.6), (79.4, 85.8, 93.2), (88.0, 93.4, 98.3), (87.9, 92.9, 98.4)]},
    0.9: {50: [(70.8, 77.2, 84.7), (75.7, 81.5, 88.0), (46.6, 53.6, 66.7), (71.7, 77.6, 86.9), (71.1, 76.9, 86.5)],
          200: [(84.1, 89.4, 94.8), (85.6, 90.8, 95.7), (67.2, 74.8, 86.2), (84.8, 89.6, 95.9), (84.7, 89.4, 95.9)]},
    0.95: {50: [(68.6, 74.4, 82.4), (73.2, 78.8, 85.7), (33.4, 39.8, 51.2), (62.7, 70.3, 79.5), (62.2, 69.9, 79.0)],
           200: [(82.0, 87.3, 93.4), (82.8, 88.1, 94.1), (53.1, 60.4, 73.0), (79.9, 86.2, 92.9), (79.9, 86.0, 92.8)]},
}

_WN = {
    None: {50: [(88.8, 93.4, 98.3), (88.9, 93.5, 98.3), (89.7, 94.5, 98.8), (88.1, 93.1, 97.9), (85.5, 90.9, 96.4)],
           200: [(89.5, 94.6, 99.0), (89.7, 94.6, 99.1), (89.9, 94.9, 99.2), (89.7, 94.7, 99.0), (88.4, 94.1, 98.8)]},
}

_MA1 = {
    -0.3: {50: [(92.0, 95.3, 98.4), (92.4, 95.5, 98.3), (95.2, 97.7, 99.5), (92.2, 95.9, 99.1), (86.0, 90.9, 96.4)],
           200: [(90.2, 95.2, 99.1), (90.2, 95.2, 99.0), (96.0, 98.3, 99.8), (93.1, 97.0, 99.7), (89.4, 94.5, 98.9)]},
    -0.5: {50: [(92.0, 95.6, 98.7), (91.9, 95.4, 98.6), (97.2, 98.7, 99.7), (96.6, 98.5, 99.7), (84.7, 89.7, 95.3)],
           200: [(91.7, 95.8, 99.1), (91.7, 95.8, 99.1), (97.0, 98.5, 99.8), (97.7, 99.4, 100.0), (89.4, 94.5, 98.6)]},
    -0.7: {50: [(95.8, 97.7, 99.3), (95.7, 97.7, 99.3), (99.2, 99.8, 100.0), (99.5, 99.9, 100.0), (85.5, 91.0, 95.4)],
           200: [(94.8, 97.9, 99.7), (95.0, 98.0, 99.7), (98.4, 99.4, 100.0), (100.0, 100.0, 100.0), (87.5, 92.4, 96.6)]},
}

# reference relative efficiencies at 95% for (CV_C, AM-PW, NW-PW)
MA1_EFFICIENCY = {
    (-0.3, 50): (1.00, 0.31, 0.05), (-0.3, 200): (1.00, 0.08, 0.23),
    (-0.5, 50): (1.00, 0.11, 0.09), (-0.5, 200): (1.00, 0.09, 1.00),
    (-0.7, 50): (1.00, 0.20, 0.64), (-0.7, 200): (1.00, 0.00, 0.99),
}

# (alpha, beta, q) -> five triples, one table per n
_MAQ50 = {
    (0.0, -0.3, 2): [(93.2, 96.6, 99.0), (93.2, 96.5, 99.0), (96.7, 98.7, 99.8), (97.2, 99.0, 99.8), (86.1, 90.3, 95.5)],
    (0.0, -0.3, 3): [(95.7, 97.7, 99.4), (95.8, 97.7, 99.4), (97.6, 99.2, 99.9), (96.9, 98.8, 99.8), (95.3, 97.8, 99.6)],
    (-0.1, -0.3, 2): [(94.0, 96.9, 99.2), (94.0, 96.7, 99.2), (97.8, 99.2, 99.9), (98.2, 99.4, 99.9), (86.0, 90.5, 95.9)],
    (-0.1, -0.3, 3): [(96.8, 98.2, 99.4), (96.5, 98.1, 99.4), (99.0, 99.7, 99.9), (98.7, 99.6, 99.9), (96.4, 98.4, 99.7)],
    (0.0, 0.3, 2): [(83.3, 89.4, 95.6), (83.7, 89.4, 95.9), (83.4, 89.7, 96.1), (78.5, 85.6, 93.7), (81.7, 87.6, 95.0)],
    (0.0, 0.3, 3): [(82.3, 89.1, 95.3), (82.8, 89.6, 95.6), (81.5, 88.6, 95.6), (78.8, 86.0, 93.8), (77.4, 84.4, 92.3)],
    (0.1, 0.3, 2): [(82.2, 88.5, 95.3), (82.0, 88.5, 95.0), (82.0, 88.7, 95.4), (80.0, 86.7, 94.3), (82.8, 88.3, 95.2)],
    (0.1, 0.3, 3): [(81.2, 87.6, 94.2), (81.5, 87.7, 94.4), (80.2, 87.2, 94.3), (76.8, 84.2, 92.4), (76.2, 83.4, 92.0)],
}
_MAQ200 = {
    (0.0, -0.3, 2): [(91.7, 95.9, 99.0), (91.7, 95.8, 99.0), (96.9, 98.8, 99.8), (98.6, 99.7, 100.0), (89.7, 94.3, 98.6)],
    (0.0, -0.3, 3): [(93.4, 97.0, 99.4), (93.3, 97.0, 99.4), (97.5, 99.0, 99.9), (98.6, 99.8, 100.0), (89.8, 94.1, 98.5)],
    (-0.1, -0.3, 2): [(92.4, 96.0, 99.1), (92.2, 96.1, 99.1), (97.7, 98.9, 99.9), (99.4, 100.0, 100.0), (89.7, 94.0, 98.4)],
    (-0.1, -0.3, 3): [(94.3, 97.5, 99.5), (94.3, 97.5, 99.5), (98.3, 99.3, 100.0), (99.8, 100.0, 100.0), (88.1, 92.9, 97.4)],
    (0.0, 0.3, 2): [(86.4, 91.9, 97.6), (86.7, 92.0, 97.5), (84.2, 90.1, 97.1), (80.7, 87.8, 95.7), (86.1, 91.8, 97.9)],
    (0.0, 0.3, 3): [(87.8, 93.1, 98.0), (88.6, 93.4, 98.1), (85.1, 91.2, 97.6), (81.0, 87.9, 95.9), (85.2, 91.1, 97.6)],
    (0.1, 0.3, 2): [(85.7, 91.4, 97.3), (86.4, 91.6, 97.4), (82.0, 88.4, 96.1), (81.9, 88.8, 96.3), (86.3, 92.1, 98.1)],
    (0.1, 0.3, 3): [(87.9, 93.4, 97.9), (88.8, 93.7, 98.1), (84.4, 90.7, 97.0), (79.3, 86.0, 94.7), (85.0, 91.1, 97.3)],
}

_AR2 = {
    0.3: {50: [(80.3, 87.5, 94.2), (80.2, 87.1, 94.0), (79.4, 94.2, 94.4), (81.1, 87.2, 94.7), (81.2, 87.4, 94.7)],
          200: [(84.6, 90.7, 96.8), (85.6, 91.3, 97.2), (80.4, 87.2, 95.3), (83.1, 89.8, 96.8), (85.5, 91.5, 97.7)]},
    0.5: {50: [(75.8, 82.5, 90.5), (76.4, 82.8, 90.6), (72.5, 80.2, 89.9), (74.0, 81.3, 90.0), (75.9, 83.1, 91.5)],
          200: [(84.4, 90.5, 96.2), (85.7, 91.2, 96.7), (77.4, 84.0, 92.3), (77.5, 84.5, 93.3), (82.7, 89.1, 96.3)]},
    0.7: {50: [(71.4, 77.7, 86.8), (74.1, 79.6, 87.4), (61.9, 70.3, 81.9), (62.5, 70.6, 82.3), (66.9, 74.0, 85.1)],
          200: [(84.5, 89.8, 95.8), (86.3, 91.1, 96.4), (77.4, 83.9, 92.7), (69.2, 77.9, 87.9), (77.0, 83.8, 92.8)]},
    0.9: {50: [(65.5, 71.4, 80.2), (68.3, 74.4, 82.5), (38.8, 44.9, 57.5), (42.0, 48.8, 60.5), (45.8, 53.0, 65.1)],
          200: [(83.4, 88.4, 93.4), (84.3, 89.2, 94.4), (59.6, 67.6, 79.0), (53.5, 61.3, 73.2), (58.5, 66.3, 77.9)]},
}

# c -> (CV_C, CV_AR, CV_PZ) triples on AR(1), phi = 0.9, n = 50
C_STUDY = {
    0.2: [(59.9, 65.4, 74.5), (75.7, 80.6, 86.5), (44.6, 51.3, 64.3)],
    0.5: [(65.7, 71.8, 79.2), (75.4, 81.3, 88.5), (41.5, 47.6, 58.1)],
    0.8: [(70.8, 77.2, 84.7), (75.7, 81.5, 88.0), (46.6, 53.6, 66.7)],
    0.9: [(71.6, 77.8, 85.2), (77.2, 82.7, 89.4), (47.0, 54.2, 67.5)],
}


def _maq(rows, n):
    return [Cell(DgpSpec("maq", n, alpha=a, beta=b, q=q), dict(zip(METHODS, triples)))
            for (a, b, q), triples in rows.items()]


def table(identifier):
    """Cells for a table identifier: "1".."7" or "c-study".

    "4" is not a simulation grid; it reuses the cells of "3" and is turned
    into efficiencies by ``efficiency_table``.
    """
    key = str(identifier)
    if key == "1":
        return _cells(lambda phi, n: DgpSpec("ar1", n, phi=phi), _AR1)
    if key == "2":
        return _cells(lambda _, n: DgpSpec("white-noise", n), _WN)
    if key in ("3", "4"):
        return _cells(lambda psi, n: DgpSpec("ma1", n, psi=psi), _MA1)
    if key == "5":
        return _maq(_MAQ50, 50)
    if key == "6":
        return _maq(_MAQ200, 200)
    if key == "7":
        return _cells(lambda phi, n: DgpSpec("ar2-half", n, phi=phi), _AR2)
    if key == "c-study":
        dgp = DgpSpec("ar1", 50, phi=0.9)
        return [Cell(dgp, dict(zip(METHODS[:3], triples)), c=c) for c, triples in C_STUDY.items()]
    raise KeyError(f"unknown table {identifier!r}; choose from {IDENTIFIERS}")


IDENTIFIERS = ("1", "2", "3", "4", "5", "6", "7", "c-study")


def methods_for(cell):
    return tuple(cell.reference)


def compare(cell, report):
    """Rows (method, level, reference, observed, deviation) in percentage points."""
    rows = []
    for m, triple in cell.reference.items():
        for level, pub in zip((0.90, 0.95, 0.99), triple):
            obs = report.coverage.get(m, {}).get(level)
            obs = None if obs is None else 100 * obs
            rows.append((m, level, pub, obs, None if obs is None else obs - pub))
    return rows


def efficiency_table(reports):
    """Observed vs reference efficiencies from MA(1) reports keyed by (psi, n)."""
    rows = []
    for (psi, n), rep in reports.items():
        ps = [rep.coverage[m][0.95] for m in ("CV_C", "AM-PW", "NW-PW")]
        rows.append(((psi, n), tuple(relative_efficiency(ps)), MA1_EFFICIENCY[(psi, n)]))
    return rows

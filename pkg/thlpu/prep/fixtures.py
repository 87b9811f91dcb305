"""Ten-node worked example and the hub networks drawn for it (labels 1-based as printed)"""

from .instance import build_instance
from ..solve.solution import Solution

EXAMPLE1_COORDS = (
    (8.43, 0.36), (7.57, 9.70), (9.12, 3.69), (5.13, 9.97), (3.67, 5.45),
    (8.71, 8.26), (5.65, 2.47), (9.68, 5.85), (4.00, 8.24), (4.20, 2.75),
)

# Same points with the precision the network drawings are made with
EXAMPLE1_COORDS_PRECISE = (
    (8.426952, 0.357648), (7.566704, 9.700764), (9.119774, 3.694816), (5.128467, 9.970362),
    (3.674127, 5.450939), (8.709690, 8.260512), (5.651874, 2.469880), (9.677091, 5.847142),
    (3.998395, 8.242882), (4.199842, 2.748433),
)

EXAMPLE1_W = (
    (634, 731, 794, 783, 482, 84, 914, 575, 17, 123),
    (510, 593, 31, 163, 659, 535, 902, 533, 817, 382),
    (821, 287, 109, 775, 958, 262, 478, 326, 996, 572),
    (702, 763, 802, 396, 760, 171, 912, 28, 198, 840),
    (184, 218, 2, 34, 676, 299, 102, 555, 763, 3),
    (673, 897, 748, 260, 519, 121, 577, 174, 0, 459),
    (861, 645, 11, 236, 5, 236, 503, 750, 681, 246),
    (982, 54, 468, 912, 705, 919, 175, 548, 698, 497),
    (832, 249, 947, 282, 183, 485, 552, 956, 147, 713),
    (292, 826, 616, 95, 720, 485, 382, 19, 393, 940),
)

# name: (p, q, (alpha, rho, gamma), hubs, tree edges, spoke allocation, upgrades)
FIGURES = {
    'thlp': (5, 2, (0.8, 0.8, 0.8), (3, 5, 6, 7, 8), ((5, 6), (6, 8), (8, 3), (3, 7)),
             {4: 6, 9: 6, 2: 6, 1: 3, 10: 7}, None),
    'thlpu-flat': (5, 2, (0.8, 0.6, 0.6), (1, 3, 6, 7, 9), ((9, 3), (6, 3), (7, 3), (1, 3)),
                   {4: 9, 5: 9, 2: 6, 8: 3, 10: 7}, (3, 9)),
    'thlpu': (5, 2, (0.8, 0.4, 0.2), (1, 2, 3, 7, 9), ((9, 7), (9, 2), (7, 3), (1, 7)),
              {4: 9, 5: 9, 6: 2, 8: 3, 10: 7}, (7, 9)),
    # same hubs with the tree of the disaggregated flow drawings, hub 1 hangs from 3
    'thlpu-x': (5, 2, (0.8, 0.4, 0.2), (1, 2, 3, 7, 9), ((9, 7), (9, 2), (7, 3), (3, 1)),
                {4: 9, 5: 9, 6: 2, 8: 3, 10: 7}, (7, 9)),
}


def example1(p=5, q=2, factors=(0.8, 0.4, 0.2), n=10, precise=False, edges=None):
    coords = EXAMPLE1_COORDS_PRECISE if precise else EXAMPLE1_COORDS
    instance = build_instance(EXAMPLE1_W, p, q, factors, coords=coords, edges=edges,
                              name='example1-precise' if precise else 'example1')
    return instance if n == 10 else instance.truncate(n)


def figure_instance(name, precise=True):
    p, q, factors = FIGURES[name][:3]
    return example1(p=p, q=q, factors=factors, precise=precise)


def figure_solution(name):
    """
    Hub network drawn for the worked example. Without upgrades (pure tree of hubs)
    the first q hubs are marked as upgraded, which costs nothing with equal factors
    """
    _, q, _, hubs, tree, spokes, upgrades = FIGURES[name]
    alloc = {hub: hub for hub in hubs}
    alloc.update(spokes)
    if upgrades is None:
        upgrades = sorted(hubs)[:q]
    return Solution.from_labels(hubs, tree, alloc, upgrades)

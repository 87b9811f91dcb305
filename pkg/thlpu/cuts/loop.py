"""Root cutting-plane loop: LP relaxation, singleton separation, append the most violated cuts"""

# pylint: disable=too-many-arguments

import logging

from .separation import separate_singleton, add_cuts
from ..errors import FormulationError
from ..solve.backends import solve

logger = logging.getLogger(__name__)


class CutLoopParams:

    def __init__(self, max_lp_rounds=10, max_cuts_total=100, lb_stall_threshold=0.01, violation_tolerance=1e-6):
        assert max_lp_rounds > 0, "at least one LP round is needed"
        assert max_cuts_total >= 0, "the cut budget cannot be negative"
        assert lb_stall_threshold > 0 and violation_tolerance > 0, "thresholds must be positive"
        self.max_lp_rounds = int(max_lp_rounds)
        self.max_cuts_total = int(max_cuts_total)
        self.lb_stall_threshold = float(lb_stall_threshold)
        self.violation_tolerance = float(violation_tolerance)

    def as_dict(self):
        return dict(vars(self))


class CutLoop:
    """
    Rounds of: solve the LP relaxation, stop on stall (relative bound improvement below the
    threshold) or round limit, separate, append cuts by decreasing violation within the budget.
    Cuts persist across rounds. The input model is left untouched
    """

    def __init__(self, instance, derived, formulation, params=None, backend='highs'):
        self.instance = instance
        self.derived = derived
        self.formulation = formulation
        self.params = CutLoopParams() if params is None else params
        self.backend = backend
        self.cuts = []
        self.stats = {'rounds': 0, 'cuts_added': 0, 'bounds': [], 'cuts_per_round': [], 'stop': None}

    def run(self, model):
        """Return (strengthened finalized model, stats)"""
        model = model.copy()
        if self.params.max_cuts_total == 0:
            self.stats['stop'] = 'no budget'
            return model.finalize(), self.stats

        while True:
            model.finalize()
            result, point = solve(model.relax(), self.backend)
            if result.status != 'optimal' or point is None:
                raise FormulationError("LP relaxation of {} ended with status {} ({})".format(
                    model.name, result.status, result.message))
            self.stats['rounds'] += 1
            bounds = self.stats['bounds']
            bounds.append(result.objective)
            improvement = None
            if len(bounds) >= 2:
                improvement = (bounds[-1] - bounds[-2]) / max(abs(bounds[-1]), 1e-12)
            logger.info("Round {}: LP bound {:.6f}, improvement {}".format(
                self.stats['rounds'], bounds[-1], 'n/a' if improvement is None else '{:.4%}'.format(improvement)))

            if improvement is not None and improvement < self.params.lb_stall_threshold:
                self.stats['stop'] = 'stall'
                break
            if self.stats['rounds'] >= self.params.max_lp_rounds:
                self.stats['stop'] = 'rounds'
                break
            budget = self.params.max_cuts_total - self.stats['cuts_added']
            if budget <= 0:
                self.stats['stop'] = 'budget'
                break

            cuts = separate_singleton(point, self.instance, self.derived, self.formulation,
                                      tol=self.params.violation_tolerance)
            model = model.copy()
            added = []
            for cut in cuts:
                if len(added) >= budget:
                    break
                if add_cuts(model, [cut]):
                    added.append(cut)
            self.cuts += added
            self.stats['cuts_added'] += len(added)
            self.stats['cuts_per_round'].append(len(added))
            if not added:
                self.stats['stop'] = 'no violated cut'
                model.finalize()
                break

        return model, self.stats


def cut_loop(model, instance, derived, formulation, params=None, backend='highs'):
    """Return (strengthened model, stats, cuts added)"""
    loop = CutLoop(instance, derived, formulation, params=params, backend=backend)
    model, stats = loop.run(model)
    return model, stats, loop.cuts

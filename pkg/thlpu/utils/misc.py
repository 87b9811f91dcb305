import json
import logging
import datetime

logger = logging.getLogger(__name__)


def now_time():
    """Short timestamp used in output file names, e.g. 201017-1530"""
    now = datetime.datetime.now()
    return now.strftime("%Y%m%d-%H%M")[2:]


def open_json(path):
    with open(path, 'r') as f:
        return json.load(f)


def save_json(dic, path):
    """Dump a dictionary with sorted keys so that files are stable across runs"""
    with open(path, 'w') as f:
        json.dump(dic, f, indent=1, sort_keys=True)
        f.write('\n')


def relative_gap(upper, lower):
    """(upper - lower) / |upper| clipped to [0, 1]; 0 when both are zero"""
    if upper is None or lower is None:
        return None
    if abs(upper) < 1e-12:
        return 0. if abs(lower) < 1e-12 else 1.
    gap = (upper - lower) / abs(upper)
    return min(max(gap, 0.), 1.)

import hashlib
import logging
import random

import numpy as np


class GuardError(ValueError):
    '''raised when an input exceeds a size guard of an exhaustive routine.
    '''
    def __init__(self, what, value, limit):
        super().__init__(f'{what}={value} exceeds the guard limit {limit}')
        self.what = what
        self.value = value
        self.limit = limit


def check_guard(what, value, limit):
    if value > limit:
        raise GuardError(what, value, limit)


def set_random_seed(seed):
    '''seed python and numpy, return a fresh numpy generator on the same seed.
    '''
    random.seed(seed)
    np.random.seed(seed % (1 << 32))
    return np.random.default_rng(seed)


def digest(text):
    if isinstance(text, str):
        text = text.encode('utf-8')
    return hashlib.sha1(text).hexdigest()[:12]


def setup_logging(verbose=False):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )

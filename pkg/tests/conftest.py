import random

import pytest

import e2ls

# Three items over three elements; capacity 9.  Optimum is items {0, 2}
# with value 14 and covered weight 9.
T1_TEXT = """SUKP
3 3
9
10 6 4
5 4 3
2 0 1
2 1 2
1 0
"""


def build_pool(count: int, offset: int, lo: int = 4, hi: int = 12):
    """Deterministic mixed-kind instance pool for oracle-backed tests."""
    rnd = random.Random(4242 + offset)
    pool = []
    for i in range(count):
        kind = "SUKP" if i % 2 == 0 else "BMCP"
        m = rnd.randint(lo, hi)
        n = rnd.randint(lo, hi)
        alpha = (0.2, 0.4, 0.6)[i % 3]
        if kind == "SUKP":
            inst = e2ls.generate_uniform(kind, m, n, alpha,
                                         beta=(0.5, 0.75, 0.9)[i % 3],
                                         seed=offset + i)
        else:
            probe = e2ls.generate_uniform(kind, m, n, alpha, budget=1,
                                          seed=offset + i)
            budget = max(1, int(probe.total_value * (0.4, 0.6, 0.8)[i % 3]))
            inst = e2ls.generate_uniform(kind, m, n, alpha, budget=budget,
                                         seed=offset + i)
        pool.append(inst)
    return pool


@pytest.fixture(scope="session")
def t1_text():
    return T1_TEXT


@pytest.fixture(scope="session")
def t1():
    return e2ls.parse_instance(T1_TEXT)


@pytest.fixture(scope="session")
def t1_bmcp(t1):
    # Same data viewed as coverage maximization under item budget 14.
    return e2ls.Instance.create("BMCP", 14, t1.values, t1.weights,
                                t1.coverage)


@pytest.fixture(scope="session")
def small_pool():
    return build_pool(40, offset=100)

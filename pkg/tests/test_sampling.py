import math
import random
from collections import Counter

import pytest
from scipy import stats

from streamfsm.graph import SubgraphInstance
from streamfsm.sampling import (
    SampleInvariantError,
    SubgraphReservoir,
    skip_rp,
    skip_rp_sequential,
    skip_rs,
    skip_rs_sequential,
)

from conftest import pmf_skip_rp, pmf_skip_rs


def _inst(*vertices):
    vs = tuple(sorted(vertices))
    return SubgraphInstance(vs, (0,) * len(vs), tuple((i, i + 1, 0) for i in range(len(vs) - 1)))


def test_insert_below_capacity_always_admits():
    res = SubgraphReservoir(5)
    res.n_population = 1
    assert res.insert(_inst(1, 2, 3), random.Random(0))
    assert res.occupancy == 1


def test_insert_admission_rate_m_over_n():
    trials = 4000
    hits = 0
    for seed in range(trials):
        res = SubgraphReservoir(5)
        for i in range(5):
            res.n_population += 1
            res.insert(_inst(3 * i, 3 * i + 1, 3 * i + 2), random.Random(seed))
        res.n_population += 1
        if res.insert(_inst(100, 101, 102), random.Random(seed)):
            hits += 1
    p = 5 / 6
    sigma = math.sqrt(p * (1 - p) / trials)
    assert abs(hits / trials - p) <= 3 * sigma


def test_insert_eviction_uniform():
    trials = 6000
    evicted = Counter()
    for seed in range(trials):
        rng = random.Random(seed)
        res = SubgraphReservoir(6)
        for i in range(6):
            res.n_population += 1
            res.insert(_inst(3 * i, 3 * i + 1, 3 * i + 2), rng)
        before = {inst.vertices for inst in res.slots}
        res.n_population += 1
        if res.insert(_inst(900, 901, 902), rng):
            after = {inst.vertices for inst in res.slots}
            (gone,) = before - after
            evicted[gone] += 1
    total = sum(evicted.values())
    chi = stats.chisquare(list(evicted.values()), [total / 6] * 6)
    assert chi.pvalue >= 1e-3


def test_duplicate_insert_rejected():
    res = SubgraphReservoir(3)
    res.n_population = 1
    res.insert(_inst(1, 2, 3), random.Random(0))
    res.n_population += 1
    with pytest.raises(SampleInvariantError):
        res.insert(_inst(1, 2, 3), random.Random(0))


def test_rp_insert_zero_probability():
    res = SubgraphReservoir(3)
    res.c2 = 3
    res.n_population = 5
    assert not res.rp_insert(_inst(1, 2, 3), random.Random(1))
    assert res.c2 == 2 and res.c1 == 0


def test_rp_insert_certain():
    res = SubgraphReservoir(3)
    res.c1 = 2
    res.n_population = 5
    assert res.rp_insert(_inst(1, 2, 3), random.Random(1))
    assert res.c1 == 1 and res.occupancy == 1


def test_rp_insert_even_coin():
    trials = 4000
    hits = 0
    for seed in range(trials):
        res = SubgraphReservoir(3)
        res.c1 = 1
        res.c2 = 1
        res.n_population = 4
        if res.rp_insert(_inst(1, 2, 3), random.Random(seed)):
            hits += 1
    sigma = math.sqrt(0.25 / trials)
    assert abs(hits / trials - 0.5) <= 3 * sigma


def test_rp_insert_full_with_debt_is_invariant_violation():
    res = SubgraphReservoir(1)
    res.n_population = 1
    res.insert(_inst(1, 2, 3), random.Random(0))
    res.c1 = 1
    res.n_population = 2
    with pytest.raises(SampleInvariantError):
        res.rp_insert(_inst(4, 5, 6), random.Random(3))  # admission certain


def test_notify_deleted_cases():
    res = SubgraphReservoir(4)
    res.n_population = 3
    for i in range(3):
        res.n_population = i + 1
        res.insert(_inst(3 * i, 3 * i + 1, 3 * i + 2), random.Random(0))
    res.n_population = 3
    assert res.notify_deleted((0, 1, 2))
    assert res.c1 == 1 and res.occupancy == 2 and res.n_population == 2
    assert not res.notify_deleted((90, 91, 92))
    assert res.c2 == 1 and res.n_population == 1
    # destroy three subgraphs, one of them sampled
    res2 = SubgraphReservoir(4)
    res2.n_population = 1
    res2.insert(_inst(1, 2, 3), random.Random(0))
    res2.n_population = 5
    res2.notify_deleted((1, 2, 3))
    res2.notify_deleted((7, 8, 9))
    res2.notify_deleted((10, 11, 12))
    assert (res2.c1, res2.c2) == (1, 2)
    assert res2.c1 + res2.c2 == 3


def test_replace_modified_neutral():
    res = SubgraphReservoir(4)
    res.n_population = 1
    wedge = SubgraphInstance((1, 2, 3), (0, 0, 0), ((0, 1, 0), (1, 2, 0)))
    res.insert(wedge, random.Random(0))
    snapshot = (res.occupancy, res.n_population, res.c1, res.c2)
    tri = wedge.with_edge(1, 3, 0)
    res.replace_modified((1, 2, 3), tri)
    assert (res.occupancy, res.n_population, res.c1, res.c2) == snapshot
    assert res.slots[0] == tri
    res.verify()
    with pytest.raises(SampleInvariantError):
        res.replace_modified((7, 8, 9), _inst(7, 8, 9))


def test_members_containing_pair():
    res = SubgraphReservoir(4)
    assert res.members_containing_pair(1, 2) == []
    res.n_population = 1
    res.insert(_inst(1, 2, 3), random.Random(0))
    assert [m.vertices for m in res.members_containing_pair(1, 2)] == [(1, 2, 3)]
    res.n_population = 2
    res.insert(_inst(1, 7, 8), random.Random(0))
    res.n_population = 3
    res.insert(_inst(1, 2, 9), random.Random(0))
    got = sorted(m.vertices for m in res.members_containing_pair(1, 2))
    assert got == [(1, 2, 3), (1, 2, 9)]


def test_index_exact_after_random_ops(rng):
    res = SubgraphReservoir(8)
    live = []
    for step in range(400):
        if live and rng.random() < 0.35:
            vs = rng.choice(live)
            live.remove(vs)
            res.notify_deleted(vs)
        else:
            vs = tuple(sorted(rng.sample(range(40), 3)))
            if any(inst.vertices == vs for inst in res.slots):
                continue
            res.n_population += 1
            if res.c1 + res.c2 > 0:
                admitted = res.rp_insert(_inst(*vs), rng)
            else:
                admitted = res.insert(_inst(*vs), rng)
            if admitted:
                live.append(vs)
        res.verify()


def test_dump_lines_stable():
    res = SubgraphReservoir(3)
    res.n_population = 1
    res.insert(_inst(2, 5, 9), random.Random(0))
    lines = res.dump_lines()
    assert lines == ["0\t2,5,9\tk=3;V=0,0,0;E=(0,1,0),(0,2,0)"]


# --- skip counters --------------------------------------------------------


def test_skip_rs_zero_while_filling():
    rng = random.Random(1)
    for n in range(5):
        assert skip_rs(n, 5, rng) == 0
        assert skip_rs_sequential(n, 5, rng) == 0


def test_skip_rs_point_probabilities():
    trials = 40000
    counts = Counter(skip_rs(1, 1, random.Random(seed)) for seed in range(trials))
    assert pmf_skip_rs(1, 1, 0) == pytest.approx(0.5)
    assert pmf_skip_rs(1, 1, 1) == pytest.approx(1 / 6)
    for z, expect in ((0, 0.5), (1, 1 / 6)):
        sigma = math.sqrt(expect * (1 - expect) / trials)
        assert abs(counts[z] / trials - expect) <= 4 * sigma


def _pmf_stream_rs(n, m):
    surv = 1.0
    z = 0
    while True:
        step = 1.0 - m / (n + z + 1)
        yield surv * (1.0 - step)  # pmf at z
        surv *= step
        z += 1


def _pmf_stream_rp(c1, d):
    surv = 1.0
    for z in range(d - c1 + 1):
        p_admit = c1 / (d - z)
        yield surv * p_admit
        surv *= 1.0 - p_admit


def _chisquare_vs_pmf(observed: Counter, trials, pmf_stream, mass_cutoff=0.99995):
    obs, exp = [], []
    bucket_o = bucket_e = 0.0
    covered = 0.0
    for z, p in enumerate(pmf_stream):
        bucket_o += observed.get(z, 0)
        bucket_e += p * trials
        covered += p
        if bucket_e >= 8:
            obs.append(bucket_o)
            exp.append(bucket_e)
            bucket_o = bucket_e = 0.0
        if covered >= mass_cutoff:
            break
    tail_o = trials - sum(obs) - bucket_o
    tail_e = trials - sum(exp) - bucket_e
    obs.append(bucket_o + tail_o)
    exp.append(bucket_e + tail_e)
    exp = [max(e, 1e-9) for e in exp]
    scale = sum(obs) / sum(exp)
    exp = [e * scale for e in exp]
    return stats.chisquare(obs, exp)


def test_skip_rs_pmf_chisquare():
    trials = 120_000
    rng = random.Random(7)
    observed = Counter(skip_rs(50, 10, rng) for _ in range(trials))
    chi = _chisquare_vs_pmf(observed, trials, _pmf_stream_rs(50, 10))
    assert chi.pvalue >= 1e-3


def test_skip_rs_long_skip_branch():
    # tiny capacity forces skips past the sequential window
    rng = random.Random(3)
    draws = [skip_rs(5000, 2, rng) for _ in range(4000)]
    assert max(draws) > 64
    trials = len(draws)
    observed = Counter(draws)
    chi = _chisquare_vs_pmf(observed, trials, _pmf_stream_rs(5000, 2), mass_cutoff=0.995)
    assert chi.pvalue >= 1e-3


def test_skip_rp_support_and_points():
    rng = random.Random(5)
    assert skip_rp(4, 4, rng) == 0
    for _ in range(200):
        assert skip_rp(2, 6, rng) <= 4
    assert pmf_skip_rp(1, 2, 0) == pytest.approx(0.5)
    assert pmf_skip_rp(1, 2, 1) == pytest.approx(0.5)
    trials = 30000
    counts = Counter(skip_rp(1, 2, random.Random(seed)) for seed in range(trials))
    sigma = math.sqrt(0.25 / trials)
    assert abs(counts[0] / trials - 0.5) <= 4 * sigma


def test_skip_rp_pmf_chisquare():
    trials = 120_000
    rng = random.Random(11)
    observed = Counter(skip_rp(3, 10, rng) for _ in range(trials))
    chi = _chisquare_vs_pmf(observed, trials, _pmf_stream_rp(3, 10), mass_cutoff=1.1)
    assert chi.pvalue >= 1e-3


def test_skip_rp_long_branch_matches_sequential():
    trials = 30000
    rng1, rng2 = random.Random(21), random.Random(22)
    fast = Counter(skip_rp(2, 400, rng1) for _ in range(trials))
    slow = Counter(skip_rp_sequential(2, 400, rng2) for _ in range(trials))
    support = sorted(set(fast) | set(slow))
    obs_f, obs_s = [], []
    bf = bs = 0
    for z in support:
        bf += fast.get(z, 0)
        bs += slow.get(z, 0)
        if bf + bs >= 40:
            obs_f.append(bf)
            obs_s.append(bs)
            bf = bs = 0
    obs_f.append(bf)
    obs_s.append(bs)
    table = [[f, s] for f, s in zip(obs_f, obs_s) if f + s > 0]
    chi = stats.chi2_contingency(list(zip(*table)))
    assert chi.pvalue >= 1e-3


def test_skip_errors():
    rng = random.Random(0)
    with pytest.raises(ValueError):
        skip_rs(3, 0, rng)
    with pytest.raises(ValueError):
        skip_rp(0, 3, rng)
    with pytest.raises(ValueError):
        skip_rp(4, 3, rng)


def _admission_indices_sequential(n0, m, arrivals, rng):
    out = []
    n = n0
    for i in range(arrivals):
        n += 1
        if rng.random() < m / n:
            out.append(i)
    return out


def _admission_indices_skip(n0, m, arrivals, rng):
    out = []
    n = n0
    consumed = 0
    while True:
        z = skip_rs(n, m, rng)
        if consumed + z + 1 > arrivals:
            break
        consumed += z + 1
        n += z + 1
        out.append(consumed - 1)
    return out


def test_skip_soundness_vs_sequential_coins():
    """First-admission index and admission count agree in distribution with
    the per-arrival coin process."""
    trials = 20000
    arrivals, n0, m = 30, 12, 6
    first_seq, first_skip = Counter(), Counter()
    count_seq, count_skip = Counter(), Counter()
    for seed in range(trials):
        seq = _admission_indices_sequential(n0, m, arrivals, random.Random(seed))
        skp = _admission_indices_skip(n0, m, arrivals, random.Random(seed + 10**6))
        first_seq[seq[0] if seq else -1] += 1
        first_skip[skp[0] if skp else -1] += 1
        count_seq[len(seq)] += 1
        count_skip[len(skp)] += 1
    for a, b in ((first_seq, first_skip), (count_seq, count_skip)):
        keys = sorted(set(a) | set(b))
        table = [[a.get(k, 0), b.get(k, 0)] for k in keys]
        table = [row for row in table if sum(row) >= 10]
        chi = stats.chi2_contingency(list(zip(*table)))
        assert chi.pvalue >= 1e-3

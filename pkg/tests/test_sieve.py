import json

import pytest

from cantorspec import (
    DomainError,
    InconsistencyError,
    find_cycles,
    infinitude_witness,
    prime_order_table,
    scan_conjectures,
    sieve_primitives,
)
from cantorspec.sieve import _waves

from reference_values import PRIME_ORDER_TABLE, PRIMITIVE_TABLE


def test_small_bounds():
    assert [r.modulus for r in sieve_primitives(3).primitives] == [3]
    assert [r.modulus for r in sieve_primitives(500).primitives] == [3, 85, 341, 455]
    report = sieve_primitives(10**4)
    assert [r.modulus for r in report.primitives] == [
        3, 85, 341, 455, 1285, 4369, 5461, 6355, 9709,
    ]
    with pytest.raises(DomainError):
        sieve_primitives(2)
    with pytest.raises(DomainError):
        sieve_primitives(100, 0)


def test_records_carry_verified_data():
    report = sieve_primitives(500)
    by_m = {r.modulus: r for r in report.primitives}
    assert by_m[85].factors.factors == ((5, 1), (17, 1))
    assert by_m[85].prime_orders == (2, 4)
    assert by_m[85].witness == find_cycles(85).cycles[0]
    assert by_m[455].prime_orders == (2, 3, 6)
    cache = report.cache_view()
    assert cache.bound == 500
    assert cache.primitive_divisor(3 * 85) == 3
    assert cache.primitive_divisor(91) is None


def test_filter_stats_cover_every_odd_modulus():
    report = sieve_primitives(10**4)
    assert sum(report.filter_stats.values()) == (10**4 + 1) // 2 - 1
    assert report.filter_stats["multiple-of-3"] == 1666
    assert report.filter_stats["oracle"] >= len(report.primitives)


def test_waves_partition_the_range():
    for n in (3, 4, 14, 15, 10**4, 10**4 + 1):
        spans = list(_waves(n))
        assert spans[0][0] == 3
        assert spans[-1][1] == n + 1
        for (lo, hi), (lo2, _) in zip(spans, spans[1:]):
            assert hi == lo2
        for lo, hi in spans:
            assert hi <= 5 * lo


def test_report_is_independent_of_worker_count():
    single = sieve_primitives(10**5, 1)
    quad = sieve_primitives(10**5, 4)
    assert [r.modulus for r in single.primitives] == [r.modulus for r in quad.primitives]
    assert [r.witness for r in single.primitives] == [r.witness for r in quad.primitives]
    assert single.filter_stats == quad.filter_stats
    assert single.worker_count == 1 and quad.worker_count == 4


def test_repeated_runs_are_deterministic():
    a = sieve_primitives(2 * 10**4)
    b = sieve_primitives(2 * 10**4)
    assert a.primitives == b.primitives
    assert a.filter_stats == b.filter_stats


def test_cache_roundtrip_and_extension(tmp_path):
    path = str(tmp_path / "waves.jsonl")
    fresh = sieve_primitives(10**4, cache_path=path)

    log = []
    replayed = sieve_primitives(10**4, cache_path=path, progress=log.append)
    assert replayed.primitives == fresh.primitives
    assert replayed.filter_stats == fresh.filter_stats
    assert any("replayed" in line for line in log)

    log = []
    extended = sieve_primitives(3 * 10**4, cache_path=path, progress=log.append)
    assert any("replayed" in line for line in log)
    assert [r.modulus for r in extended.primitives] == [
        r.modulus for r in sieve_primitives(3 * 10**4).primitives
    ]

    shrunk = sieve_primitives(500, cache_path=path)
    assert [r.modulus for r in shrunk.primitives] == [3, 85, 341, 455]


def test_cache_rejects_garbage(tmp_path):
    path = tmp_path / "waves.jsonl"
    path.write_text("not json\n")
    with pytest.raises(DomainError):
        sieve_primitives(500, cache_path=str(path))

    path.write_text(json.dumps({"format": "something-else", "version": 1}) + "\n")
    with pytest.raises(DomainError):
        sieve_primitives(500, cache_path=str(path))


def test_cache_tampering_is_detected(tmp_path):
    path = tmp_path / "waves.jsonl"
    sieve_primitives(500, cache_path=str(path))
    lines = path.read_text().splitlines()
    for i, line in enumerate(lines):
        record = json.loads(line)
        if record.get("kind") == "primitive" and record["m"] == 85:
            record["witness"]["points"] = [1, 2, 3, 4]
            lines[i] = json.dumps(record)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(InconsistencyError):
        sieve_primitives(500, cache_path=str(path))


def test_prime_order_table_matches_the_frozen_reference():
    table = prime_order_table(1049)
    assert tuple(table) == PRIME_ORDER_TABLE
    assert table[0] == (3, 1)
    assert dict(table)[683] == 11
    with pytest.raises(DomainError):
        prime_order_table(2)


def test_infinitude_witnesses_small_values():
    assert infinitude_witness(3) == (85, True)
    assert infinitude_witness(4) == (341, True)
    assert infinitude_witness(6) == (5461, True)
    m, ok = infinitude_witness(40)
    assert ok and m == (4**41 - 1) // 3 and m.bit_length() > 64
    with pytest.raises(DomainError):
        infinitude_witness(2)


def test_conjecture_scan_is_clean_at_small_scale():
    report = scan_conjectures(10**4)
    assert report.violation_count() == 0
    assert report.max_bound == 10**4
    assert report.squarefree_violations == ()
    assert report.lcm_violations == ()
    assert report.coprime_complete_violations == ()


def test_conjecture_scan_reuses_a_wider_sieve():
    wide = sieve_primitives(10**5)
    report = scan_conjectures(10**4, sieve_report=wide)
    assert report.violation_count() == 0


def test_every_reference_primitive_passes_the_oracle():
    for m, primes, orders in PRIMITIVE_TABLE:
        if m > 10**4:
            continue
        inventory = find_cycles(m)
        assert inventory.cycles

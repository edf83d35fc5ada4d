import random

import pytest

from progres.model import (
    Budget,
    EntityProfile,
    GroundTruth,
    SelfPairError,
    Source,
    Task,
    canonical_pair,
)


def test_dedup_canonical_ordering_is_forced():
    assert canonical_pair(7, 3, Task.DEDUP) == (3, 7)
    assert canonical_pair(3, 7, Task.DEDUP) == (3, 7)


def test_record_linkage_source_slot_rule():
    # SourceB id given first still lands in the right slot
    assert canonical_pair(12, 4, Task.RECORD_LINKAGE, Source.B, Source.A) == (4, 12)
    assert canonical_pair(4, 12, Task.RECORD_LINKAGE, Source.A, Source.B) == (4, 12)


def test_dedup_self_pair_rejected():
    with pytest.raises(SelfPairError):
        canonical_pair(5, 5, Task.DEDUP)


def test_canonicalize_symmetric_and_idempotent():
    rng = random.Random(7)
    for _ in range(200):
        a, b = rng.sample(range(50), 2)
        fwd = canonical_pair(a, b, Task.DEDUP)
        assert fwd == canonical_pair(b, a, Task.DEDUP)
        assert fwd == canonical_pair(*fwd, Task.DEDUP)
        rl = canonical_pair(a, b, Task.RECORD_LINKAGE, Source.A, Source.B)
        assert rl == canonical_pair(b, a, Task.RECORD_LINKAGE, Source.B, Source.A)


def test_canonical_set_never_holds_both_orientations():
    rng = random.Random(11)
    keys = set()
    for _ in range(500):
        a, b = rng.sample(range(20), 2)
        keys.add(canonical_pair(a, b, Task.DEDUP))
    assert not any((b, a) in keys for a, b in keys if a != b)


def test_record_linkage_requires_both_sources():
    with pytest.raises(ValueError):
        canonical_pair(1, 2, Task.RECORD_LINKAGE)
    with pytest.raises(ValueError):
        canonical_pair(1, 2, Task.RECORD_LINKAGE, Source.A, Source.A)


def test_agnostic_text_skips_empty_values_and_lowercases():
    profile = EntityProfile.build(0, Source.A, [("name", "John Doe"), ("mid", ""), ("city", "London")])
    assert profile.agnostic_text == "john doe london"
    assert all(name not in profile.agnostic_text for name, _ in profile.attributes)


def test_entity_profile_rejects_negative_id():
    with pytest.raises(ValueError):
        EntityProfile.build(-1, Source.A, [("x", "y")])


def test_weighted_pair_rejects_negative_weight():
    from progres.model import WeightedPair

    with pytest.raises(ValueError):
        WeightedPair(0, 1, -0.25)


def test_budget_must_be_positive():
    assert Budget(1).value == 1
    with pytest.raises(ValueError):
        Budget(0)


def test_groundtruth_canonical_dedup():
    gt = GroundTruth.from_pairs([(1, 5), (5, 1)], Task.DEDUP)
    assert gt.dup_count == 1
    assert gt.pairs == frozenset({(1, 5)})

import math
import random

import pytest

from conftest import make_profiles, random_texts
from oracles import blocking_oracle
from progres.blocking import (
    BLOCKING_SCHEMES,
    Block,
    BlockCollection,
    block_filtering,
    block_purging,
    blocking_workflow,
    build_graph,
    token_blocking,
)
from progres.model import Source, Task


def dedup_collection(blocks: dict[str, tuple[int, ...]]) -> BlockCollection:
    return BlockCollection(Task.DEDUP, {sig: Block(a=ids) for sig, ids in blocks.items()})


def graph_weights(collection, scheme):
    return {p.key: p.weight for p in build_graph(collection, scheme).pairs}


# --- token blocking ---------------------------------------------------------

def test_shared_token_forms_block():
    a = make_profiles(["london rain"], Source.A)
    b = make_profiles(["london fog"], Source.B)
    blocks = token_blocking(a, b).blocks
    assert "london" in blocks
    assert blocks["london"] == Block(a=(0,), b=(0,))


def test_one_sided_token_dropped():
    a = make_profiles(["unique london"], Source.A)
    b = make_profiles(["london"], Source.B)
    assert "unique" not in token_blocking(a, b).blocks


def test_repeated_token_listed_once():
    blocks = token_blocking(make_profiles(["a a b", "a b"])).blocks
    assert blocks["a"].a == (0, 1)
    assert blocks["b"].a == (0, 1)


def test_dedup_singleton_blocks_dropped():
    blocks = token_blocking(make_profiles(["solo", "other tok", "tok extra"])).blocks
    assert "solo" not in blocks and "tok" in blocks


# --- block purging ----------------------------------------------------------

def test_purging_uniform_cardinality_keeps_everything():
    coll = dedup_collection({"s1": (0, 1), "s2": (2, 3), "s3": (4, 5)})
    assert set(block_purging(coll).blocks) == {"s1", "s2", "s3"}


def test_purging_drops_jumbo_block():
    # four pair-blocks (size 2, 1 pair each): cumulative ratio 8/4 = 2.0
    # jumbo block of 46 entities adds 46 assignments and 1035 pairs:
    # 54/1039 < 2.0, so the sweep purges everything above cardinality 1
    blocks = {f"s{i}": (2 * i, 2 * i + 1) for i in range(4)}
    blocks["jumbo"] = tuple(range(46))
    purged = block_purging(dedup_collection(blocks))
    assert set(purged.blocks) == {"s0", "s1", "s2", "s3"}


def test_purging_empty_collection():
    assert block_purging(dedup_collection({})).blocks == {}


def test_purging_never_adds_pairs():
    rng = random.Random(8)
    profiles = make_profiles(random_texts(rng, 40, vocab_size=10))
    raw = token_blocking(profiles)
    purged = block_purging(raw)
    assert purged.total_pairs() <= raw.total_pairs()
    assert set(purged.blocks) <= set(raw.blocks)


# --- block filtering --------------------------------------------------------

def rl_star_collection(n_blocks: int) -> BlockCollection:
    # entity a0 sits in n blocks of cardinalities 1..n (b-side fillers)
    blocks = {}
    next_b = 0
    for j in range(1, n_blocks + 1):
        blocks[f"s{j:02d}"] = Block(a=(0,), b=tuple(range(next_b, next_b + j)))
        next_b += j
    return BlockCollection(Task.RECORD_LINKAGE, blocks)


def test_filtering_keeps_ceil_80_percent():
    kept5 = block_filtering(rl_star_collection(5)).blocks
    assert len(kept5) == 4
    kept1 = block_filtering(rl_star_collection(1)).blocks
    assert len(kept1) == 1


def test_filtering_drops_two_largest_of_ten():
    kept = block_filtering(rl_star_collection(10)).blocks
    assert set(kept) == {f"s{j:02d}" for j in range(1, 9)}


def test_filtering_monotone_on_random_instances():
    rng = random.Random(9)
    profiles = make_profiles(random_texts(rng, 50, vocab_size=12))
    purged = block_purging(token_blocking(profiles))
    filtered = block_filtering(purged)
    assert filtered.total_pairs() <= purged.total_pairs()


# --- weighting schemes ------------------------------------------------------

def test_identical_block_sets_normalize_to_one():
    coll = dedup_collection({"s1": (0, 1), "s2": (0, 1, 2, 3)})
    for scheme in ("cosine", "dice", "jaccard", "sn_cosine", "sn_dice", "sn_jaccard",
                   "cn_cosine", "cn_dice", "cn_jaccard"):
        assert graph_weights(coll, scheme)[(0, 1)] == pytest.approx(1.0, abs=1e-12)


def test_cb_family_hand_example():
    # B_0 = {s1, s2}, B_1 = {s2, s3}: CB=1, Jaccard=1/3, Dice=1/2, Cosine=1/2
    coll = dedup_collection({"s1": (0, 8), "s2": (0, 1), "s3": (1, 9)})
    assert graph_weights(coll, "cb")[(0, 1)] == 1.0
    assert graph_weights(coll, "jaccard")[(0, 1)] == pytest.approx(1 / 3, abs=1e-12)
    assert graph_weights(coll, "dice")[(0, 1)] == pytest.approx(0.5, abs=1e-12)
    assert graph_weights(coll, "cosine")[(0, 1)] == pytest.approx(0.5, abs=1e-12)


def test_sn_cb_hand_example():
    # shared blocks of sizes 2 and 4: SN-CB = 1/2 + 1/4
    coll = dedup_collection({"s1": (0, 1), "s2": (0, 1, 2, 3)})
    assert graph_weights(coll, "sn_cb")[(0, 1)] == pytest.approx(0.75, abs=1e-12)


def test_ecb_is_symmetric_not_papers_typo():
    # |B|=4; entity 0 in one block, entity 1 in two: ln(4/1)*ln(4/2)
    coll = dedup_collection({"s1": (0, 1), "s2": (1, 2), "s3": (2, 3), "s4": (3, 4)})
    w01 = graph_weights(coll, "ecb")[(0, 1)]
    assert w01 == pytest.approx(math.log(4.0) * math.log(2.0), abs=1e-12)


def test_ejs_hand_example():
    # ring of four blocks: |E| = 4, every degree 2, Jaccard = 1/3
    coll = dedup_collection({"s1": (0, 1), "s2": (1, 2), "s3": (2, 3), "s4": (0, 3)})
    w = graph_weights(coll, "ejs")[(0, 1)]
    assert w == pytest.approx((1 / 3) * math.log(2.0) ** 2, abs=1e-12)


def test_ejs_and_ecb_clamp_at_zero():
    # a single block: |B| = 1 makes every ECB log zero or negative
    coll = dedup_collection({"s1": (0, 1, 2)})
    assert all(w == 0.0 for w in graph_weights(coll, "ecb").values())
    assert all(w >= 0.0 for w in graph_weights(coll, "ejs").values())


def test_weights_symmetric_and_normalized_in_unit_interval():
    rng = random.Random(10)
    profiles = make_profiles(random_texts(rng, 30, vocab_size=8))
    coll = block_filtering(block_purging(token_blocking(profiles)))
    for scheme in ("cosine", "dice", "jaccard", "sn_cosine", "sn_dice", "sn_jaccard",
                   "cn_cosine", "cn_dice", "cn_jaccard"):
        for _, w in graph_weights(coll, scheme).items():
            assert 0.0 <= w <= 1.0 + 1e-12


def test_unknown_scheme_rejected():
    with pytest.raises(ValueError):
        build_graph(dedup_collection({"s": (0, 1)}), "w99")


# --- full pipeline vs oracle -------------------------------------------------

@pytest.mark.parametrize("scheme", BLOCKING_SCHEMES)
def test_oracle_equivalence_dedup(scheme):
    rng = random.Random(hash(scheme) & 0xFFFF)
    texts = random_texts(rng, 25, vocab_size=9)
    got = {p.key: p.weight for p in blocking_workflow(make_profiles(texts), None, scheme)}
    expected = blocking_oracle(texts, None, scheme)
    assert set(got) == set(expected)
    for key, w in expected.items():
        assert got[key] == pytest.approx(w, abs=1e-9)


def test_oracle_equivalence_record_linkage():
    rng = random.Random(77)
    texts_a = random_texts(rng, 20, vocab_size=9)
    texts_b = random_texts(rng, 15, vocab_size=9)
    a = make_profiles(texts_a, Source.A)
    b = make_profiles(texts_b, Source.B)
    for scheme in ("cb", "sn_jaccard", "cn_cosine", "ecb", "ejs"):
        got = {p.key: p.weight for p in blocking_workflow(a, b, scheme)}
        expected = blocking_oracle(texts_a, texts_b, scheme)
        assert set(got) == set(expected)
        for key, w in expected.items():
            assert got[key] == pytest.approx(w, abs=1e-9)


def test_pair_sets_shrink_monotonically_through_cleaning():
    from progres.blocking import _pair_nodes

    rng = random.Random(123)
    for _ in range(10):
        profiles = make_profiles(random_texts(rng, rng.randint(10, 60), vocab_size=10))
        raw = token_blocking(profiles)
        purged = block_purging(raw)
        filtered = block_filtering(purged)
        raw_pairs = set(_pair_nodes(raw))
        purged_pairs = set(_pair_nodes(purged))
        filtered_pairs = set(_pair_nodes(filtered))
        assert filtered_pairs <= purged_pairs <= raw_pairs

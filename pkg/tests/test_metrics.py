"""Metric tests, anchored on a brute-force oracle that enumerates every
injective unigram matching and takes (max matches, then min chunks)."""

import math
import random
import unicodedata
from pathlib import Path

import pytest

from copticforge import (
    AlignedPair,
    IncompleteTableError,
    InvalidTableEntryError,
    MeteorParams,
    MissingReferenceError,
    ScoreTable,
    VerseId,
    drop_table,
    evaluate_corpus,
    load_score_table,
    meteor,
    relative_drop,
    tokenize,
)

DATA = Path(__file__).parent / "data"


def _oracle_tokens(text):
    out = []
    for word in text.split():
        start, end = 0, len(word)
        while start < end and unicodedata.category(word[start]).startswith("P"):
            start += 1
        while end > start and unicodedata.category(word[end - 1]).startswith("P"):
            end -= 1
        core = word[start:end].lower()
        if core:
            out.append(core)
    return out


def _oracle_meteor(hypothesis, reference, alpha=0.9, gamma=0.5, beta=3.0):
    hyp, ref = _oracle_tokens(hypothesis), _oracle_tokens(reference)
    if not hyp or not ref:
        return 0.0
    best = {"m": 0, "chunks": 0}

    def consider(pairs):
        m = len(pairs)
        chunks = 0
        prev = None
        for hyp_pos, ref_pos in pairs:
            if prev is None or hyp_pos != prev[0] + 1 or ref_pos != prev[1] + 1:
                chunks += 1
            prev = (hyp_pos, ref_pos)
        if m > best["m"] or (m == best["m"] and m > 0 and chunks < best["chunks"]):
            best["m"], best["chunks"] = m, chunks

    def enumerate_matchings(i, used, pairs):
        if i == len(hyp):
            consider(pairs)
            return
        enumerate_matchings(i + 1, used, pairs)
        for j in range(len(ref)):
            if j not in used and ref[j] == hyp[i]:
                enumerate_matchings(i + 1, used | {j}, pairs + [(i, j)])

    enumerate_matchings(0, frozenset(), [])
    if best["m"] == 0:
        return 0.0
    precision = best["m"] / len(hyp)
    recall = best["m"] / len(ref)
    fmean = precision * recall / (alpha * precision + (1 - alpha) * recall)
    penalty = gamma * (best["chunks"] / best["m"]) ** beta
    return fmean * (1 - penalty)


def test_identical_ten_distinct_tokens():
    text = "a b c d e f g h i j"
    assert meteor(text, text) == pytest.approx(0.9995, abs=1e-9)


def test_disjoint_token_sets_score_zero():
    assert meteor("un deux trois", "quatre cinq six") == 0.0


def test_empty_strings_score_zero():
    assert meteor("", "texte") == 0.0
    assert meteor("texte", "") == 0.0
    assert meteor("", "") == 0.0


def test_single_identical_token():
    # m=1, chunks=1: Fmean 1, penalty gamma*(1)^beta = 0.5
    assert meteor("dieu", "dieu") == pytest.approx(0.5)


def test_tokenize_strips_edge_punctuation_and_lowercases():
    assert tokenize("Paul, apôtre!  (DIEU)") == ["paul", "apôtre", "dieu"]
    assert tokenize("... ---") == []


def test_reordered_tokens_are_penalized():
    reference = "le pain de la terre"
    assert meteor(reference, reference) > meteor("terre la de pain le", reference)


def test_perfect_match_beats_all_permutations():
    rng = random.Random(4)
    tokens = ["un", "deux", "trois", "quatre", "cinq"]
    reference = " ".join(tokens)
    top = meteor(reference, reference)
    for _ in range(30):
        shuffled = tokens[:]
        rng.shuffle(shuffled)
        assert meteor(" ".join(shuffled), reference) <= top + 1e-12


def test_scores_bounded():
    rng = random.Random(9)
    vocabulary = ["a", "b", "c", "d", "e", "f"]
    for _ in range(300):
        hyp = " ".join(rng.choices(vocabulary, k=rng.randint(0, 8)))
        ref = " ".join(rng.choices(vocabulary, k=rng.randint(0, 8)))
        assert 0.0 <= meteor(hyp, ref) <= 1.0


def test_oracle_equivalence_small_sentences():
    # >= 1000 random pairs with <= 6 tokens per side, exact equality
    rng = random.Random(225)
    vocabulary = ["a", "b", "c", "d", "e"]
    for trial in range(1200):
        hyp = " ".join(rng.choices(vocabulary, k=rng.randint(1, 6)))
        ref = " ".join(rng.choices(vocabulary, k=rng.randint(1, 6)))
        expected = _oracle_meteor(hyp, ref)
        assert meteor(hyp, ref) == pytest.approx(expected, abs=1e-12), (
            f"trial {trial}: {hyp!r} vs {ref!r}"
        )


def test_oracle_equivalence_with_punctuation_and_case():
    rng = random.Random(31)
    vocabulary = ["Le", "pain,", "VIE.", "(et)", "ciel"]
    for _ in range(300):
        hyp = " ".join(rng.choices(vocabulary, k=rng.randint(1, 6)))
        ref = " ".join(rng.choices(vocabulary, k=rng.randint(1, 6)))
        assert meteor(hyp, ref) == pytest.approx(_oracle_meteor(hyp, ref), abs=1e-12)


def test_long_identical_sentence_penalty_shrinks():
    tokens = [f"w{i}" for i in range(40)]  # beyond the exact-search cutoff
    text = " ".join(tokens)
    assert meteor(text, text) == pytest.approx(1 - 0.5 * (1 / 40) ** 3)


def test_repeated_token_flood_is_deterministic_and_sane():
    text = " ".join(["a"] * 30)
    score = meteor(text, text)
    assert score == pytest.approx(1 - 0.5 * (1 / 30) ** 3)


def test_params_validation():
    with pytest.raises(ValueError):
        MeteorParams(alpha=1.0)
    with pytest.raises(ValueError):
        MeteorParams(gamma=1.5)
    with pytest.raises(ValueError):
        MeteorParams(beta=0)
    with pytest.raises(ValueError):
        MeteorParams(stages=())
    with pytest.raises(ValueError):
        MeteorParams(stages=("stem",))


def _ref_pair(verse, text, version="segond"):
    return AlignedPair(
        id=VerseId("Gen", 1, verse),
        source_text="ⲁ",
        reference_text=text,
        version=version,
    )


def test_evaluate_corpus_single_pair():
    refs = [_ref_pair(1, "le pain de vie")]
    report = evaluate_corpus([(VerseId("Gen", 1, 1), "segond", "le pain de vie")], refs)
    assert report.corpus_mean == report.per_verse[0][2]


def test_evaluate_corpus_mean_of_two():
    refs = [_ref_pair(1, "a b c d"), _ref_pair(2, "x y z w")]
    hyps = [
        (VerseId("Gen", 1, 1), "segond", "a b c d"),
        (VerseId("Gen", 1, 2), "segond", "nope"),
    ]
    report = evaluate_corpus(hyps, refs)
    s = report.per_verse[0][2]
    assert report.per_verse[1][2] == 0.0
    assert report.corpus_mean == pytest.approx(s / 2)


def test_evaluate_corpus_missing_reference():
    with pytest.raises(MissingReferenceError):
        evaluate_corpus([(VerseId("Gen", 1, 9), "segond", "x")], [_ref_pair(1, "a")])


def test_evaluate_corpus_hundred_verses_against_summation_oracle():
    rng = random.Random(55)
    vocabulary = ["dieu", "le", "pain", "ciel", "terre", "eau", "vie"]
    refs, hyps = [], []
    for verse in range(1, 101):
        ref_text = " ".join(rng.choices(vocabulary, k=rng.randint(2, 7)))
        hyp_text = " ".join(rng.choices(vocabulary, k=rng.randint(2, 7)))
        refs.append(_ref_pair(verse, ref_text))
        hyps.append((VerseId("Gen", 1, verse), "segond", hyp_text))
    report = evaluate_corpus(hyps, refs)
    expected = math.fsum(meteor(h[2], r.reference_text) for h, r in zip(hyps, refs))
    assert report.corpus_mean == pytest.approx(expected / 100, abs=1e-12)
    assert len(report.per_verse) == 100


def test_evaluate_corpus_empty():
    assert evaluate_corpus([], []).corpus_mean == 0.0


@pytest.mark.parametrize(
    "clean,noisy,expected",
    [
        (0.850, 0.788, 7.3),
        (0.564, 0.366, 35.1),
        (0.497, 0.232, 53.3),
        (0.5, 0.25, 50.0),
        (0.4, 0.4, 0.0),
    ],
)
def test_relative_drop_known_values(clean, noisy, expected):
    assert relative_drop(clean, noisy) == expected


def test_relative_drop_rounds_half_up():
    # binary-exact inputs landing exactly on a half: 6.25 -> 6.3 under
    # half-up (banker's rounding would give 6.2)
    assert relative_drop(0.5, 0.46875) == 6.3
    # and an exact three-quarters case: 18.75 -> 18.8 either way
    assert relative_drop(0.5, 0.40625) == 18.8


def test_relative_drop_zero_clean_score():
    with pytest.raises(ZeroDivisionError):
        relative_drop(0.0, 0.1)


def test_score_table_roundtrip(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text(
        "test_noise,train_noise,metric,score\n0,0,meteor,0.5\n1,0,meteor,0.25\n",
        encoding="utf-8",
    )
    table = load_score_table(path)
    assert table.rows[(0.0, 0.0, "meteor")] == 0.5
    matrix = drop_table(table)
    assert matrix.cells[(0.0, "meteor")] == 50.0


def test_score_table_bad_header(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text("a,b,c,d\n", encoding="utf-8")
    with pytest.raises(InvalidTableEntryError):
        load_score_table(path)


def test_score_table_rejects_out_of_range(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text("test_noise,train_noise,metric,score\n0,0,m,1.5\n", encoding="utf-8")
    with pytest.raises(InvalidTableEntryError):
        load_score_table(path)


def test_score_table_rejects_duplicates(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text(
        "test_noise,train_noise,metric,score\n0,0,m,0.5\n0,0,m,0.6\n",
        encoding="utf-8",
    )
    with pytest.raises(InvalidTableEntryError):
        load_score_table(path)


def test_drop_table_requires_both_endpoints():
    table = ScoreTable(rows={(0.0, 0.0, "meteor"): 0.5, (0.5, 0.0, "meteor"): 0.4})
    with pytest.raises(IncompleteTableError):
        drop_table(table)


def test_drop_table_constant_scores():
    rows = {}
    for train in (0.0, 0.5):
        for test in (0.0, 1.0):
            rows[(test, train, "meteor")] = 0.7
    matrix = drop_table(ScoreTable(rows=rows))
    assert set(matrix.cells.values()) == {0.0}


def test_drop_table_half_ratio():
    rows = {}
    for train in (0.0, 0.1, 0.3):
        rows[(0.0, train, "m")] = 0.8
        rows[(1.0, train, "m")] = 0.4
    matrix = drop_table(ScoreTable(rows=rows))
    assert all(value == 50.0 for value in matrix.cells.values())


def test_drop_matrix_cells_match_relative_drop():
    table = load_score_table(DATA / "helsinki_sweep_scores.csv")
    matrix = drop_table(table)
    for (train, metric), value in matrix.cells.items():
        assert value == relative_drop(
            table.rows[(0.0, train, metric)], table.rows[(1.0, train, metric)]
        )


def test_drop_matrix_csv_layout():
    table = load_score_table(DATA / "helsinki_sweep_scores.csv")
    text = drop_table(table).to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "train_noise,bertscore,bleurt,comet,meteor"
    assert len(lines) == 6  # header + 5 train rates
    assert lines[1].startswith("0,")

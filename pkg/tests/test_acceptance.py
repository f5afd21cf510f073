"""Acceptance checks, one test per criterion; run with ``pytest -s tests/test_acceptance.py``
to see each PASS/FAIL line as it happens (a summary is printed either way)."""
import itertools
import random
import subprocess
import sys
import time
from collections import Counter

import numpy as np
import pytest
from scipy.stats import linregress

from tokensweep.classifier import CLASSES
from tokensweep.config import FLAGS, TOKENIZERS, Configuration
from tokensweep.corpus import gen_synthetic, heaps_fit, inject_misspellings, zipf_stream
from tokensweep.evaluation import Featurizer, accuracy, cross_validate, macro_f1
from tokensweep.sweep import (FAST_FLAGS, SweepRecord, enumerate_ids, expand_combinations,
                              fast_preset, reduced_subsets, run_sweep, tokenizer_subsets, topk)
from tokensweep.textnorm import normalize
from tokensweep.tokenizers import jaccard, tokenize_qgrams, tokenize_words

from test_tokenizers import EXAMPLE2, PUBLISHED_4GRAMS

EXAMPLE = "pésiiiimo auto :( @autoX fallan frenos y sistema de entretenimiento; no lo compren"

# time limits and tolerances
GOLDEN_SECONDS = 1.0
ARITHMETIC_SECONDS = 5.0
COUNTING_SECONDS = 30.0
CLASSIFIER_SECONDS = 60.0
COMBINATION_SECONDS = 300.0
MIN_ACCURACY = 0.99
MIN_MACRO_F1 = 0.99
HEAPS_TOL = 1e-9
METRIC_TOL = 1e-12


@pytest.mark.criterion(1, "golden transformations and 4-gram bag")
def test_criterion_1_goldens(lex):
    start = time.perf_counter()
    one = normalize(EXAMPLE, Configuration(stem=True, del_d1=True, del_diac=True, usr=True,
                                           neg=True), lex)
    two = normalize(EXAMPLE, Configuration(del_diac=True, emo=True, usr=True, lc=True, neg=True,
                                           tfidf=True, tokenizers=("q4",)), lex)
    grams = set(tokenize_qgrams(two, 4, pad=True))
    elapsed = time.perf_counter() - start
    assert one == "pesim aut :( _user fal fren y sistem de entreten ; lo no_compr"
    assert two == EXAMPLE2
    assert grams == PUBLISHED_4GRAMS
    assert elapsed < GOLDEN_SECONDS


@pytest.mark.criterion(2, "tokenizer arithmetic on 1,000 random strings")
def test_criterion_2_arithmetic():
    rng = random.Random(2)
    alphabet = "abcdeñá _;:"
    start = time.perf_counter()
    for _ in range(1000):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
        m = len(text)
        words = len(text.split())
        for q in range(3, 8):
            assert sum(tokenize_qgrams(text, q).values()) == max(0, m - q + 1)
        for n in (1, 2):
            assert sum(tokenize_words(text, n).values()) == max(0, words - n + 1)
    assert time.perf_counter() - start < ARITHMETIC_SECONDS


@pytest.mark.criterion(3, "Jaccard robustness of 3-grams over words")
def test_criterion_3_jaccard():
    t1, t2 = "I like vanilla", "I lik3 vanila"
    words = jaccard(tokenize_words(t1, 1), tokenize_words(t2, 1))
    assert words == 0.2

    def grams(s):
        s = s.replace(" ", "_")
        return {s[i:i + 3] for i in range(len(s) - 2)}

    a, b = grams(t1), grams(t2)
    oracle = len(a & b) / len(a | b)
    value = jaccard(tokenize_qgrams(t1, 3), tokenize_qgrams(t2, 3))
    assert value == oracle
    assert value > words


@pytest.mark.criterion(4, "configuration space counts")
def test_criterion_4_counts():
    start = time.perf_counter()
    ids = set(enumerate_ids("single"))
    assert len(ids) == 229_376
    assert len(tokenizer_subsets()) == 127
    assert len(reduced_subsets()) == 16
    rng = random.Random(4)
    picks = rng.sample(range(2 ** len(FLAGS)), 32)
    records = []
    for p in picks:
        flags = {f: bool(p >> i & 1) for i, f in enumerate(FLAGS)}
        cid = Configuration(tokenizers=("w1",), **flags).config_id
        records.append(SweepRecord(cid, rng.random(), 0.0, []))
    assert len(list(expand_combinations(records, 32))) == 4064
    assert time.perf_counter() - start < COUNTING_SECONDS


@pytest.mark.criterion(5, "top-k table properties")
def test_criterion_5_topk():
    rng = random.Random(5)
    ids = set()
    while len(ids) < 512:
        flags = {f: rng.random() < 0.5 for f in FLAGS}
        ids.add(Configuration(tokenizers=(rng.choice(TOKENIZERS),), **flags).config_id)
    records = [SweepRecord(cid, round(rng.random(), 4), rng.random(), []) for cid in sorted(ids)]
    rows = topk(records)
    assert set(rows[0].flag_probs.values()) <= {0.0, 1.0}
    accs = [r.accuracy for r in rows]
    assert all(x >= y for x, y in zip(accs, accs[1:]))

    factorial = [SweepRecord(Configuration(tokenizers=("q3",),
                                           **dict(zip(FLAGS, bits))).config_id,
                             rng.random(), 0.0, [])
                 for bits in itertools.product((False, True), repeat=len(FLAGS))]
    (row,) = topk(factorial, ks=[2 ** 15])
    assert all(p == 0.5 for p in row.flag_probs.values())


@pytest.mark.criterion(6, "classifier sanity on the bundled corpus")
def test_criterion_6_classifier(mini_corpus, tmp_path):
    start = time.perf_counter()
    configs = [Configuration(tokenizers=("w1",)), Configuration(tfidf=True, tokenizers=("w1",))]
    for cfg in configs:
        res = cross_validate(mini_corpus, cfg)
        assert res.accuracy >= MIN_ACCURACY
        assert res.macro_f1 >= MIN_MACRO_F1
        assert cross_validate(mini_corpus, cfg).to_dict() == res.to_dict()
    one, two = tmp_path / "w1.jsonl", tmp_path / "w2.jsonl"
    run_sweep(mini_corpus, configs, one, workers=1)
    run_sweep(mini_corpus, configs, two, workers=2)
    assert one.read_bytes() == two.read_bytes()
    assert time.perf_counter() - start < CLASSIFIER_SECONDS


@pytest.mark.criterion(7, "tokenizer combinations vs single words on misspelled keywords")
def test_criterion_7_combinations():
    start = time.perf_counter()
    docs = gen_synthetic(400, seed=7, misspell_rate=0.6)
    feats = Featurizer([d.text for d in docs])
    family = fast_preset()
    multi = max(cross_validate(docs, c, featurizer=feats).accuracy
                for c in family if len(c.tokenizers) > 1)
    single = max(cross_validate(docs, Configuration.from_flags({**FAST_FLAGS, "tfidf": tf}, ("w1",)),
                                featurizer=feats).accuracy
                 for tf in (False, True))
    print(f"\n  best multi-tokenizer {multi:.4f} vs best w1 {single:.4f}")
    assert multi >= single
    assert time.perf_counter() - start < COMBINATION_SECONDS


@pytest.mark.criterion(8, "Heaps fit against a reference regression")
def test_criterion_8_heaps():
    stream = zipf_stream(300_000, 30_000, 1.0, seed=8)
    clean = heaps_fit(stream, 3_000)
    ref = linregress(np.log([n for n, _ in clean.points]), np.log([v for _, v in clean.points]))
    assert abs(clean.alpha - ref.slope) <= HEAPS_TOL
    assert 0 < clean.alpha < 1
    noisy = heaps_fit(inject_misspellings(stream, 0.1, seed=8), 3_000)
    assert noisy.alpha > clean.alpha


@pytest.mark.criterion(9, "metric oracles")
def test_criterion_9_metrics():
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randint(1, 50)
        gold = [rng.choice(CLASSES) for _ in range(n)]
        pred = [rng.choice(CLASSES) for _ in range(n)]
        conf = Counter(zip(gold, pred))
        f1s = []
        for c in CLASSES:
            tp = conf[(c, c)]
            fp = sum(v for (g, p), v in conf.items() if p == c and g != c)
            fn = sum(v for (g, p), v in conf.items() if g == c and p != c)
            f1s.append(2 * tp / (2 * tp + fp + fn) if tp + fp + fn else 0.0)
        assert abs(macro_f1(gold, pred) - sum(f1s) / 4) <= METRIC_TOL
        hits = sum(conf[(c, c)] for c in CLASSES)
        assert abs(accuracy(gold, pred) - hits / n) <= METRIC_TOL


@pytest.mark.criterion(10, "sweep --preset fast is worker-count independent")
def test_criterion_10_determinism(tmp_path):
    outs = []
    for workers in (1, 4):
        out = tmp_path / f"fast{workers}.jsonl"
        res = subprocess.run([sys.executable, "-m", "tokensweep.cli", "sweep", "--preset", "fast",
                              "--workers", str(workers), "--out", str(out)],
                             capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        assert res.stdout.startswith("127 evaluated, 0 skipped, 127 records")
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert len(outs[0].splitlines()) == 127

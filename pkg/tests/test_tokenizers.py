from collections import Counter

import pytest
from hypothesis import given, strategies as st

from tokensweep.config import ConfigError
from tokensweep.tokenizers import (jaccard, qgram_text, tag, tokenize_multi,
                                   tokenize_qgrams, tokenize_words)

# 4-grams printed for the second worked example (tags with a leading underscore).
PUBLISHED_4GRAMS = {
    "_pes", "pesi", "esii", "siii", "iiii", "iiim", "iimo", "imo_", "mo_a", "o_au", "_aut",
    "auto", "uto_", "to__", "o__n", "__ne", "_neg", "nega", "egat", "gati", "ativ", "tivo",
    "ivo_", "vo__", "o__u", "__us", "_use", "user", "ser_", "er_f", "r_fa", "_fal", "fall",
    "alla", "llan", "lan_", "an_f", "n_fr", "_fre", "fren", "reno", "enos", "nos_", "os_y",
    "s_y_", "_y_s", "y_si", "_sis", "sist", "iste", "stem", "tema", "ema_", "ma_d", "a_de",
    "_de_", "de_e", "e_en", "_ent", "entr", "ntre", "tret", "rete", "eten", "teni", "enim",
    "nimi", "imie", "mien", "ient", "ento", "nto_", "to_;", "o_;_", "_;_l", ";_lo", "_lo_",
    "lo_n", "o_no", "_no_", "no_c", "o_co", "_com", "comp", "ompr", "mpre", "pren", "ren_",
}
EXAMPLE2 = "pesiiiimo auto _negativo _user fallan frenos y sistema de entretenimiento ; lo no_compren"

T1, T2 = "I like vanilla", "I lik3 vanila"


def window_oracle(s: str, q: int) -> list[str]:
    out = []
    for start in range(len(s)):
        piece = ""
        for j in range(start, len(s)):
            piece += s[j]
            if len(piece) == q:
                out.append(piece)
                break
    return out


def test_word_bigrams():
    bag = tokenize_words("the lights and shadows of your future", 2)
    assert set(bag) == {"the lights", "lights and", "and shadows", "shadows of", "of your",
                        "your future"}
    assert tokenize_words("hola", 1) == Counter({"hola": 1})
    assert tokenize_words("hola", 2) == Counter()


def test_rejects_sizes():
    with pytest.raises(ValueError):
        tokenize_words("a b", 3)
    with pytest.raises(ValueError):
        tokenize_qgrams("abc", 2)
    with pytest.raises(ValueError):
        tokenize_qgrams("abc", 8)


def test_qgrams_short_text():
    assert tokenize_qgrams("ab", 3) == Counter()


def test_vanilla_qgrams_match_oracle_and_printed_sets():
    a = tokenize_qgrams(T1, 3)
    assert a == Counter(window_oracle("I_like_vanilla", 3))
    assert set(a) == {"I_l", "_li", "lik", "ike", "ke_", "e_v", "_va", "van", "ani", "nil",
                      "ill", "lla"}
    assert set(tokenize_qgrams(T2, 3)) == {"I_l", "_li", "lik", "ik3", "k3_", "3_v", "_va",
                                           "van", "ani", "nil", "ila"}


def test_abra_cadabra():
    bag = tokenize_qgrams("abra cadabra", 3)
    assert sum(bag.values()) == 10
    assert bag == Counter(window_oracle("abra_cadabra", 3))
    assert "aca" not in bag


def test_example2_four_grams(lex):
    padded = tokenize_qgrams(EXAMPLE2, 4, pad=True)
    assert set(padded) == PUBLISHED_4GRAMS
    assert set(tokenize_qgrams(EXAMPLE2, 4)) == PUBLISHED_4GRAMS - {"_pes", "ren_"}


def test_jaccard_words_and_grams():
    w = jaccard(tokenize_words(T1, 1), tokenize_words(T2, 1))
    assert w == 0.2
    a, b = set(window_oracle("I_like_vanilla", 3)), set(window_oracle("I_lik3_vanila", 3))
    oracle = len(a & b) / len(a | b)
    g = jaccard(tokenize_qgrams(T1, 3), tokenize_qgrams(T2, 3))
    assert g == oracle == 7 / 16
    assert g > w


def test_jaccard_edge_cases():
    assert jaccard(Counter(), Counter()) == 1.0
    assert jaccard(Counter("abc"), Counter("abc")) == 1.0
    assert jaccard(Counter("ab"), Counter("cd")) == 0.0


def test_multi_tags():
    assert tokenize_multi("ab cd", ["w1"]) == Counter({"w1:ab": 1, "w1:cd": 1})
    assert sum(tokenize_multi("hola mundo", ["w1", "q3"]).values()) == 2 + 8
    with pytest.raises(ConfigError):
        tokenize_multi("x", [])
    with pytest.raises(ConfigError):
        tokenize_multi("x", ["q9"])


texts = st.text(alphabet="ab c_ñ", max_size=30)
subsets = st.sets(st.sampled_from(["w1", "w2", "q3", "q4", "q5", "q6", "q7"]), min_size=1)


@given(texts, st.integers(3, 7))
def test_qgram_count(text, q):
    bag = tokenize_qgrams(text, q)
    assert sum(bag.values()) == max(0, len(qgram_text(text)) - q + 1)
    assert bag == Counter(window_oracle(qgram_text(text), q))


@given(texts, st.integers(1, 2))
def test_word_count(text, n):
    assert sum(tokenize_words(text, n).values()) == max(0, len(text.split()) - n + 1)


@given(texts, subsets, subsets)
def test_multi_disjoint_union(text, a, b):
    b = b - a
    if not b:
        return
    assert tokenize_multi(text, a | b) == tokenize_multi(text, a) + tokenize_multi(text, b)


@given(texts)
def test_singleton_is_tagged_qgrams(text):
    assert tokenize_multi(text, {"q5"}) == tag(tokenize_qgrams(text, 5), "q5")


@given(texts, texts)
def test_jaccard_symmetric(x, y):
    a, b = tokenize_qgrams(x, 3), tokenize_qgrams(y, 3)
    assert jaccard(a, b) == jaccard(b, a)
    assert jaccard(a, a) == 1.0

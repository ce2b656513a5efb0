# Copyright 2026 The Glor Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import itertools
import math
import struct

import pytest

import glor


def _stable_key(parts):
    mask = (1 << 64) - 1
    h = 0xCBF29CE484222325
    for part in parts:
        data = part.encode("utf-8")
        for byte in struct.pack("<Q", len(data)) + data:
            h = ((h ^ byte) * 0x100000001B3) & mask
    z = (h + 0x9E3779B97F4A7C15) & mask
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return format(z ^ (z >> 31), "016x")


def test_stable_key_matches_pure_python():
    for parts in (["a", "b"], ["ab"], [""], ["generation-arena", "gpt-5", "wiki:1"], ["Gaeilge é"]):
        assert glor.stable_key(parts) == _stable_key(parts)
    assert glor.stable_key(["a", "b"]) == "1af435023e560471"
    with pytest.raises(ValueError):
        glor.stable_key([])


def test_containment_hand_case():
    assert glor.containment("a b c", "a b x", width=2)["containment"] == 0.5
    assert glor.containment("a b c", "a b c", width=2)["containment"] == 1.0
    assert glor.normalize("Dia duit, A Chara!") == ["dia", "duit", "a", "chara"]
    assert len(glor.shingle("a b a b a b", 2)) == 2


def test_manifest_proportions_sum_to_one():
    result = glor.manifest_proportions([("bible", 5), ("wiki", 15)])
    props = [s["proportion"] for s in result["sources"]]
    assert props == [0.25, 0.75]


def test_bradley_terry_and_rank():
    fit = glor.bt_fit(["a", "b", "c"], [[0, 133, 160], [67, 0, 133], [40, 67, 0]])
    assert fit["ranking"] == ["a", "b", "c"]
    assert glor.rank(["b", "a"], [1.0, 1.0]) == ["a", "b"]


def test_kappa_against_formula():
    a = ["A"] * 25 + ["B"] * 25
    b = ["A"] * 20 + ["B"] * 5 + ["A"] * 10 + ["B"] * 15
    assert glor.kappa(a, b)["kappa"] == pytest.approx(0.4, abs=1e-15)
    with pytest.raises(glor.DegenerateError):
        glor.kappa(["A", "A"], ["A", "A"])


def test_mode_and_usage_errors():
    assert glor.mode([["A", "B"], ["A", "A"], ["B", "B"]]) == ["A", "B"]
    with pytest.raises(glor.UsageError):
        glor.mode([["A"], ["B"]])


def _exact_p(x, y):
    def u(a, b):
        return sum(1.0 if p > q else 0.5 if p == q else 0.0 for p in a for q in b)

    pooled = x + y
    observed = u(x, y)
    hits = total = 0
    for idx in itertools.combinations(range(len(pooled)), len(x)):
        chosen = set(idx)
        a = [pooled[i] for i in idx]
        b = [pooled[i] for i in range(len(pooled)) if i not in chosen]
        total += 1
        hits += u(a, b) >= observed
    return observed, hits / total


def test_mann_whitney_exact():
    result = glor.mwu([5, 7], [1, 2, 3])
    assert result["u1"] == 6
    assert result["p"] == pytest.approx(0.1)
    for x, y in (([1, 2, 2, 4], [2, 3, 3]), ([0, 0, 1], [0, 1, 1, 1, 2])):
        u1, p = _exact_p(x, y)
        got = glor.mwu(x, y)
        assert got["u1"] == u1
        assert got["p"] == pytest.approx(p, abs=1e-12)


def test_text_metrics():
    same = ["tá an madra mór ag rith"]
    assert glor.bleu(same, same)["score"] == pytest.approx(1.0)
    score = glor.bleu(["an madra"], ["an madra mór"], max_n=1)["score"]
    assert score == pytest.approx(math.exp(1 - 3 / 2))
    assert glor.exact_match(["Corcaigh."], ["corcaigh"]) == 1.0
    stats = glor.length_stats(["a b c", ""], bin_width=2)
    assert stats["word_counts"] == [3, 0]
    assert glor.__version__

"""Deterministic generator of synthetic multi-corpus datasets.

Stands in for real (non-redistributable) longform annotation data in every
end-to-end test. References are sampled from a Zipf-like vocabulary;
recognizer hypotheses are derived from each reference by planting an
explicit corruption script whose exact edit distance is known by
construction, so each utterance's true WER is available as an oracle
without running any alignment code:

  * substituted and inserted tokens come from a reserved vocabulary that
    never appears in references, and
  * a single utterance mixes substitutions with either deletions or
    insertions, never both,

which together guarantee the minimum edit distance equals the number of
planted operations. Confidence and acoustic features are monotone
functions of the true WER plus Gaussian noise scaled by ``feature_noise``;
at zero noise the dataset is perfectly separable at the class boundary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .records import atomic_write_text, write_record_file

CONFIG_SCHEMA = "synth-config"
CONFIG_VERSION = 1

# (surface, expected frequency rank order). Function words lead, content
# words follow; the built-in tagger knows every entry, so lexical analytics
# on generated data gets a realistic POS spread.
BASE_LEXICON: tuple[str, ...] = (
    "the", "you", "it", "a", "i", "and", "that", "to", "is", "what",
    "we", "this", "do", "no", "yeah", "on", "go", "can", "are", "look",
    "your", "okay", "put", "want", "see", "like", "there", "he", "she",
    "they", "me", "my", "of", "in", "not", "get", "up", "down",
    "here", "good", "little", "big", "more", "one", "two", "three",
    "baby", "mommy", "daddy", "ball", "cat", "dog", "book", "cup",
    "cupcake", "milk", "juice", "water", "cookie", "shoe", "sock",
    "toy", "truck", "duck", "bear", "bird", "fish", "bunny", "train",
    "car", "house", "door", "chair", "table", "spoon", "banana", "apple",
    "block", "hat", "nose", "eye", "hand", "foot", "head", "hair",
    "bed", "bath", "story", "song", "game", "box", "grandma", "grandpa",
    "play", "played", "playing", "plays", "eat", "eats", "eating", "ate",
    "drink", "drinks", "went", "going", "goes", "gone", "come", "comes",
    "coming", "came", "sit", "sits", "sat", "run", "runs", "running",
    "ran", "jump", "jumps", "jumped", "jumping", "open", "opens",
    "opened", "close", "closed", "wash", "washes", "washed", "find",
    "found", "make", "makes", "made", "making", "take", "takes", "took",
    "give", "gives", "gave", "hold", "holds", "held", "throw", "threw",
    "catch", "caught", "say", "says", "said", "tell", "told", "know",
    "knows", "knew", "think", "thought", "need", "needs", "help", "helps",
    "wait", "stop", "fall", "fell", "read", "reading", "sleep", "sleeping",
    "slept", "nice", "pretty", "funny", "silly", "happy", "sad", "hot",
    "cold", "wet", "dry", "clean", "dirty", "red", "blue", "green",
    "yellow", "soft", "new", "old", "small", "tiny", "hungry", "tired",
    "loud", "quiet", "fast", "slow", "sweet", "yummy", "warm", "now",
    "again", "too", "very", "really", "just", "out", "back", "away",
    "around", "together", "almost", "maybe", "soon", "today", "outside",
    "inside", "off", "please", "hi", "bye", "wow", "oh", "huh", "yes",
    "cats", "dogs", "balls", "books", "cookies", "shoes", "socks",
    "toys", "ducks", "birds", "blocks", "babies", "stories", "boxes",
    "hands", "eyes", "feet", "children", "gently", "quickly", "slowly",
)

SPEAKERS: tuple[str, ...] = ("FEM", "MAL", "CHI")

# Reserved corruption vocabulary prefix; never sampled into references.
_CORRUPT_PREFIX = "zq"


@dataclass(frozen=True)
class SynthConfig:
    seed: int
    corpora: int
    utterances_per_corpus: int
    vocabulary_size: int
    low_wer_fraction: float
    feature_noise: float
    duration_range_ms: tuple[int, int]
    zipf_exponent: float = 1.1
    wer_boundary: float = 0.30
    class_gap: float = 0.0

    def validate(self) -> None:
        if self.corpora < 1:
            raise ValueError("corpora must be >= 1")
        if self.utterances_per_corpus < 1:
            raise ValueError("utterances_per_corpus must be >= 1")
        if self.vocabulary_size < 10:
            raise ValueError("vocabulary_size must be >= 10")
        if not 0.0 <= self.low_wer_fraction <= 1.0:
            raise ValueError("low_wer_fraction must be in [0, 1]")
        if self.feature_noise < 0:
            raise ValueError("feature_noise must be >= 0")
        lo, hi = self.duration_range_ms
        if lo <= 0 or hi < lo:
            raise ValueError("duration_range_ms must satisfy 0 < min <= max")
        if not 0.0 < self.wer_boundary < 1.0:
            raise ValueError("wer_boundary must be in (0, 1)")
        if self.class_gap < 0 or self.wer_boundary - self.class_gap <= 0 \
                or self.wer_boundary + self.class_gap >= 1:
            raise ValueError("class_gap must keep both regimes inside (0, 1)")

    def as_dict(self) -> dict:
        return {
            "schema": CONFIG_SCHEMA, "version": CONFIG_VERSION,
            "seed": self.seed, "corpora": self.corpora,
            "utterances_per_corpus": self.utterances_per_corpus,
            "vocabulary_size": self.vocabulary_size,
            "low_wer_fraction": self.low_wer_fraction,
            "feature_noise": self.feature_noise,
            "duration_range_ms": list(self.duration_range_ms),
            "zipf_exponent": self.zipf_exponent,
            "wer_boundary": self.wer_boundary,
            "class_gap": self.class_gap,
        }


def load_config(path: str | Path) -> SynthConfig:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("schema") != CONFIG_SCHEMA:
        raise ValueError(f"{path}: not a {CONFIG_SCHEMA} document")
    if doc.get("version", 1) > CONFIG_VERSION:
        raise ValueError(f"{path}: config version {doc.get('version')} too new")
    config = SynthConfig(
        seed=int(doc["seed"]), corpora=int(doc["corpora"]),
        utterances_per_corpus=int(doc["utterances_per_corpus"]),
        vocabulary_size=int(doc["vocabulary_size"]),
        low_wer_fraction=float(doc["low_wer_fraction"]),
        feature_noise=float(doc["feature_noise"]),
        duration_range_ms=(int(doc["duration_range_ms"][0]),
                           int(doc["duration_range_ms"][1])),
        zipf_exponent=float(doc.get("zipf_exponent", 1.1)),
        wer_boundary=float(doc.get("wer_boundary", 0.30)),
        class_gap=float(doc.get("class_gap", 0.0)),
    )
    config.validate()
    return config


def save_config(config: SynthConfig, path: str | Path) -> None:
    atomic_write_text(path, json.dumps(config.as_dict(), indent=2) + "\n")


def _vocabulary(config: SynthConfig) -> list[str]:
    vocab = list(BASE_LEXICON[:config.vocabulary_size])
    for i in range(len(vocab), config.vocabulary_size):
        vocab.append(f"dax{i - len(BASE_LEXICON) + 1}")
    return vocab


# Reference length distribution: short, child-directed-speech flavored.
_LENGTHS = np.arange(1, 13)
_LENGTH_WEIGHTS = np.array([6, 9, 11, 11, 10, 9, 8, 7, 6, 5, 4, 3], dtype=np.float64)
_LENGTH_P = _LENGTH_WEIGHTS / _LENGTH_WEIGHTS.sum()


class _Corruptor:
    """Plants edit scripts with a known exact distance."""

    def __init__(self, rng: np.random.RandomState):
        self.rng = rng
        self.counter = 0

    def _fresh_token(self) -> str:
        self.counter += 1
        return f"{_CORRUPT_PREFIX}{self.counter}"

    def corrupt(self, ref: list[str], k: int) -> list[str]:
        """Apply k edit operations; the result's edit distance to ref is k.

        Mixes substitutions with either deletions or insertions (never both
        in one utterance) and keeps at least one output token.
        """
        n = len(ref)
        if k <= 0:
            return list(ref)
        k = min(k, n)
        if self.rng.rand() < 0.5:
            dels = int(self.rng.randint(0, k + 1))
            dels = min(dels, n - 1)  # never delete the whole utterance
            subs = k - dels
            ins = 0
        else:
            ins = int(self.rng.randint(0, k + 1))
            subs = k - ins
            dels = 0
        touched = self.rng.choice(n, size=subs + dels, replace=False)
        sub_pos = set(int(p) for p in touched[:subs])
        del_pos = set(int(p) for p in touched[subs:])
        out: list[str] = []
        for i, tok in enumerate(ref):
            if i in del_pos:
                continue
            out.append(self._fresh_token() if i in sub_pos else tok)
        for _ in range(ins):
            slot = int(self.rng.randint(0, len(out) + 1))
            out.insert(slot, self._fresh_token())
        return out


def _planted_edits(rng: np.random.RandomState, n: int, low: bool,
                   boundary: float, gap: float) -> int:
    """Edit count whose realized rate k/n stays on the intended class side.

    A nonzero ``gap`` keeps realized rates out of (boundary - gap,
    boundary + gap], widening the separation between the classes.
    """
    if low:
        ceiling = boundary - gap
        target = rng.uniform(0.0, ceiling)
        return min(int(round(target * n)), math.floor(ceiling * n))
    floor_w = boundary + gap
    target = rng.uniform(floor_w, 1.0)
    return min(n, max(int(round(target * n)), math.floor(floor_w * n) + 1))


def _decorate(tokens: list[str], rng: np.random.RandomState) -> str:
    """Render tokens as a transcript string with surface noise that the
    default normalization policy removes (casing, final punctuation,
    occasional annotation markup)."""
    text = " ".join(tokens)
    style = rng.rand()
    if style < 0.5:
        text = text[:1].upper() + text[1:]
    if style < 0.35:
        text += "." if style < 0.25 else "?"
    if rng.rand() < 0.04:
        text += " [noise]"
    return text


@dataclass(frozen=True)
class SynthOutput:
    rows: dict[str, list[dict]]       # schema name -> record rows
    wer_table: dict[str, float]       # utterance id -> planted strong WER


def build(config: SynthConfig) -> SynthOutput:
    """Generate all record rows and the planted-WER oracle table."""
    config.validate()
    rng = np.random.RandomState(config.seed)
    corruptor = _Corruptor(rng)
    vocab = _vocabulary(config)
    ranks = np.arange(1, len(vocab) + 1, dtype=np.float64)
    zipf_p = ranks ** (-config.zipf_exponent)
    zipf_p /= zipf_p.sum()
    zipf_cum = np.cumsum(zipf_p)

    utt_rows: list[dict] = []
    hyp_rows: list[dict] = []
    align_rows: list[dict] = []
    ac_rows: list[dict] = []
    wer_table: dict[str, float] = {}

    lo_ms, hi_ms = config.duration_range_ms
    n_rec = max(1, config.utterances_per_corpus // 25)

    for ci in range(config.corpora):
        corpus = f"C{ci + 1:02d}"
        rec_clocks_ms = [0] * n_rec
        for ui in range(config.utterances_per_corpus):
            uid = f"{corpus}-u{ui + 1:04d}"
            rec_idx = ui % n_rec
            recording = f"{corpus}-r{rec_idx + 1:02d}"

            length = int(rng.choice(_LENGTHS, p=_LENGTH_P))
            draws = rng.random_sample(length)
            ref_tokens = [vocab[min(int(np.searchsorted(zipf_cum, d)), len(vocab) - 1)]
                          for d in draws]

            duration_ms = int(rng.randint(lo_ms, hi_ms + 1))
            gap_ms = int(rng.randint(200, 1500))
            start_ms = rec_clocks_ms[rec_idx] + gap_ms
            rec_clocks_ms[rec_idx] = start_ms + duration_ms
            speaker = SPEAKERS[int(rng.randint(0, len(SPEAKERS)))]

            low = bool(rng.rand() < config.low_wer_fraction)
            k = _planted_edits(rng, length, low, config.wer_boundary,
                               config.class_gap)
            strong_tokens = corruptor.corrupt(ref_tokens, k)
            w = k / length
            wer_table[uid] = w

            noise = config.feature_noise
            # Shared per-utterance difficulty: confidence channels fail
            # together on hard audio, so the noise cannot be averaged away
            # across features. Channel- and word-level jitter sit on top.
            eps_u = float(rng.standard_normal())
            eps_ch = rng.standard_normal(6)

            # With probability growing in the noise level, both engines agree
            # on the same wrong text (correlated high-confidence failures), so
            # low divergence stops being a guarantee of a good transcript.
            if rng.rand() < min(0.5, 0.12 * noise):
                weak_tokens = list(strong_tokens)
            else:
                weak_target = w + 0.15 + noise * 0.3 * float(eps_ch[5])
                weak_target = min(1.0, max(0.0, weak_target))
                k_weak = min(length, int(round(weak_target * length)))
                weak_tokens = corruptor.corrupt(ref_tokens, k_weak)

            strong_base = -0.1 - 2.0 * w + noise * (1.0 * eps_u + 0.35 * float(eps_ch[0]))
            weak_base = -0.3 - 1.6 * w + noise * (0.8 * eps_u + 0.35 * float(eps_ch[1]))
            align_base = -0.05 - 1.2 * w + noise * (0.7 * eps_u + 0.35 * float(eps_ch[2]))

            def _lps(base: float, count: int, jitter: float) -> list[float]:
                return [round(base + noise * jitter * float(rng.standard_normal()), 6)
                        for _ in range(count)]

            strong_lps = _lps(strong_base, len(strong_tokens), 0.25)
            weak_lps = _lps(weak_base, len(weak_tokens), 0.25)
            align_lps = _lps(align_base, len(strong_tokens), 0.2)
            snr = round(12.0 - 18.0 * w
                        + noise * (9.0 * eps_u + 3.5 * float(eps_ch[3])), 4)
            c50 = round(22.0 - 16.0 * w
                        + noise * (8.0 * eps_u + 3.0 * float(eps_ch[4])), 4)

            utt_rows.append({
                "id": uid, "corpus": corpus, "recording": recording,
                "start_s": start_ms / 1000.0,
                "end_s": (start_ms + duration_ms) / 1000.0,
                "speaker": speaker,
                "reference": _decorate(ref_tokens, rng),
            })
            hyp_rows.append({
                "utterance_id": uid, "engine": "weak",
                "words": [{"text": t, "logprob": lp}
                          for t, lp in zip(weak_tokens, weak_lps)],
            })
            hyp_rows.append({
                "utterance_id": uid, "engine": "strong",
                "words": [{"text": t, "logprob": lp}
                          for t, lp in zip(_decorate_hyp(strong_tokens, rng), strong_lps)],
            })
            align_rows.append({
                "utterance_id": uid,
                "words": [{"text": t, "logprob": lp}
                          for t, lp in zip(strong_tokens, align_lps)],
            })
            ac_rows.append({"utterance_id": uid, "snr_db": snr, "c50_db": c50})

    rows = {"utterances": utt_rows, "hypotheses": hyp_rows,
            "alignment": align_rows, "acoustics": ac_rows}
    return SynthOutput(rows=rows, wer_table=wer_table)


def _decorate_hyp(tokens: list[str], rng: np.random.RandomState) -> list[str]:
    """Surface-decorate a strong hypothesis the way production recognizers
    do (leading capital, trailing period); normalization removes it all."""
    if not tokens:
        return tokens
    out = list(tokens)
    if rng.rand() < 0.5:
        out[0] = out[0][:1].upper() + out[0][1:]
    if rng.rand() < 0.3:
        out[-1] = out[-1] + "."
    return out


def generate(config: SynthConfig, out_dir: str | Path) -> dict[str, Path]:
    """Write the full record-file set; byte-identical for identical config."""
    output = build(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}
    for schema in ("utterances", "hypotheses", "alignment", "acoustics"):
        paths[schema] = out / f"{schema}.jsonl"
        write_record_file(paths[schema], schema, output.rows[schema])
    return paths


def true_wer_table(config: SynthConfig) -> dict[str, float]:
    """Planted strong-hypothesis WER per utterance id.

    Recomputing WER from the generated files with the default normalization
    policy reproduces these values exactly.
    """
    return build(config).wer_table

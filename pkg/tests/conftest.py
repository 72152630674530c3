from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"


@pytest.fixture
def golden():
    return GOLDEN


@pytest.fixture
def golden_args(golden):
    return [
        "--corpus-dir", str(golden / "docs"),
        "--stopwords", str(golden / "stopwords.txt"),
        "--lemmas", str(golden / "lemmas.tsv"),
        "--collocations", str(golden / "collocations.txt"),
    ]


def write_corpus(root: Path, texts: dict, metadata: str | None = None) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    for doc_id, text in texts.items():
        (root / f"{doc_id}.txt").write_text(text, encoding="utf-8")
    if metadata is not None:
        (root.parent / "meta.csv").write_text(metadata, encoding="utf-8")
    return root


def pseudo_words(n: int, seed: int = 0) -> list[str]:
    """Distinct lowercase pseudo-words; 'work' is always first."""
    import numpy as np
    rng = np.random.default_rng(seed)
    onsets = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st"]
    vowels = ["a", "e", "i", "o", "u"]
    words, seen = ["work"], {"work"}
    while len(words) < n:
        syl = rng.integers(2, 4)
        w = "".join(onsets[rng.integers(len(onsets))] + vowels[rng.integers(len(vowels))]
                    for _ in range(syl))
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words


def make_text_corpus(root: Path, n_docs: int, doc_len: int, n_terms: int = 600, k: int = 5,
                     seed: int = 0) -> Path:
    """Raw-text documents drawn from an LDA generative process."""
    import numpy as np
    from corpusmix.lda import sample_corpus

    sim = sample_corpus(k, n_terms, n_docs, doc_len, alpha=0.5, delta=0.1, seed=seed)
    words = pseudo_words(n_terms, seed)
    rng = np.random.default_rng(seed + 1)
    root.mkdir(parents=True, exist_ok=True)
    X = sim.dtm.matrix.toarray()
    for d, row_id in enumerate(sim.dtm.rows):
        tokens = np.repeat(np.arange(n_terms), X[d])
        rng.shuffle(tokens)
        sentences, i = [], 0
        while i < len(tokens):
            step = int(rng.integers(6, 16))
            sentences.append(" ".join(words[t] for t in tokens[i:i + step]).capitalize() + ".")
            i += step
        (root / f"{row_id}.txt").write_text(" ".join(sentences) + "\n", encoding="utf-8")
    return root


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)

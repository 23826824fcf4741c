"""Prompt assembly for the 38-case generation matrix."""

from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

SCENARIOS = ("A", "B", "C")
# Example sequences in results-table order within each grammar block.
EXAMPLE_ORDERS: tuple[tuple[str, ...], ...] = (
    (), ("A",), ("A", "B"), ("A", "B", "C"), ("A", "C"), ("B", "C"), ("B", "A"), ("C", "A"), ("C", "B"),
)
CASE_COUNT = 38
BASE_STATEMENT = "Symboleo is a formal language used to specify legal contracts."
GRAMMAR_HEADER = "Here is Symboleo's syntax in Xtext format:"
QUERY_CLAUSES = (
    "i) The customer orders a computer from a store, to be delivered within 7 days;",
    "ii) The customer agrees to pay a deposit worth between 15% and 20% of the computer price, on the same day;",
    "iii) The customer agrees to pay the remaining amount of the computer price within 10 days of delivery;",
    "iv) If delivery is late, the customer has the option (power) to cancel the contract or get a 5% "
    "reduction on the original price and pay within 10 days of delivery.",
)
_ORDINALS = ("First", "Second", "Third")
BLOCK_SEPARATOR = "\n\n"


class MissingScenarioAsset(LookupError):
    def __init__(self, letter: str) -> None:
        self.letter = letter
        super().__init__(f"scenario {letter} has no contract text or Symboleo specification")


class InvalidAssets(ValueError):
    pass


def _matrix_entry(case_id: int) -> tuple[bool, bool, bool, tuple[str, ...]]:
    """(grammar, theory, emotional, examples) for a case id of the results table."""
    if not 1 <= case_id <= CASE_COUNT:
        raise ValueError(f"case id must be in 1..{CASE_COUNT}, got {case_id}")
    if case_id == 1:
        return False, False, False, ()
    if case_id == 2:
        return False, False, False, ("A", "B", "C")
    block, pos = divmod(case_id - 3, len(EXAMPLE_ORDERS))
    theory, emotional = divmod(block, 2)
    return True, bool(theory), bool(emotional), EXAMPLE_ORDERS[pos]


@dataclass(frozen=True)
class PromptConfig:
    include_grammar: bool = False
    include_theory: bool = False
    include_emotional: bool = False
    examples: tuple[str, ...] = ()
    case_id: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "examples", tuple(self.examples))
        if len(self.examples) > len(SCENARIOS):
            raise ValueError("at most three examples")
        if len(set(self.examples)) != len(self.examples):
            raise ValueError(f"duplicate scenario in {self.examples}")
        for letter in self.examples:
            if letter not in SCENARIOS:
                raise ValueError(f"unknown scenario {letter!r}")
        if self.case_id is not None and self.flags() != _matrix_entry(self.case_id):
            raise ValueError(f"config does not match matrix entry {self.case_id}")

    def flags(self) -> tuple[bool, bool, bool, tuple[str, ...]]:
        return self.include_grammar, self.include_theory, self.include_emotional, self.examples

    @property
    def scenario_label(self) -> str:
        return "".join(self.examples) or "No."

    @classmethod
    def for_case(cls, case_id: int) -> PromptConfig:
        return cls(*_matrix_entry(case_id), case_id=case_id)


def paper_matrix() -> list[PromptConfig]:
    return [PromptConfig.for_case(i) for i in range(1, CASE_COUNT + 1)]


def _read(path: Path) -> str:
    # Asset files end with a newline; blocks are joined by blank lines instead.
    return path.read_text(encoding="utf-8").rstrip("\n")


@dataclass(frozen=True)
class PromptAssets:
    base_statement: str
    grammar_block: str
    theory_block: str
    emotional_block: str
    scenario_texts: Mapping[str, tuple[str, str]]
    final_query: str

    def __post_init__(self) -> None:
        if self.base_statement != BASE_STATEMENT:
            raise InvalidAssets(f"base statement must be exactly {BASE_STATEMENT!r}")
        missing = [c for c in QUERY_CLAUSES if c not in self.final_query]
        if missing:
            raise InvalidAssets(f"final query lacks clause {missing[0]!r}")

    @classmethod
    def load(cls, directory: str | os.PathLike | None = None, *, grammar: str | os.PathLike | None = None) -> PromptAssets:
        """Read assets from ``directory`` (the bundled set by default).

        ``grammar`` substitutes another grammar file, e.g. the full Xtext source.
        Absent scenarios are tolerated here and reported when an example needs them.
        """
        root = Path(directory) if directory is not None else Path(str(resources.files("symboleo_kit") / "assets"))
        try:
            scenarios = {}
            for letter in SCENARIOS:
                contract = root / "scenarios" / letter / "contract.txt"
                spec = root / "scenarios" / letter / "spec.symboleo"
                if contract.is_file() and spec.is_file():
                    scenarios[letter] = (_read(contract), _read(spec))
            return cls(
                base_statement=_read(root / "base.txt"),
                grammar_block=_read(Path(grammar) if grammar is not None else root / "grammar.txt"),
                theory_block=_read(root / "theory.txt"),
                emotional_block=_read(root / "emotional.txt"),
                scenario_texts=scenarios,
                final_query=_read(root / "query.txt"),
            )
        except FileNotFoundError as exc:
            raise InvalidAssets(f"missing asset file {exc.filename}") from exc


def example_block(position: int, contract: str, spec: str) -> str:
    return (
        f"Here is the {_ORDINALS[position]} example of a legal contract in natural language, "
        f"followed by its Symboleo specification:\n{contract}\n"
        f"The corresponding Symboleo specification is:\n{spec}"
    )


def assemble(config: PromptConfig, assets: PromptAssets, *, emotional_before_examples: bool = False) -> str:
    """Build the prompt text for ``config``.

    The emotional directive sits between the examples and the final query unless
    ``emotional_before_examples`` moves it ahead of them.
    """
    blocks = [assets.base_statement]
    if config.include_grammar:
        blocks.append(f"{GRAMMAR_HEADER}\n{assets.grammar_block}")
    if config.include_theory:
        blocks.append(assets.theory_block)
    examples = []
    for i, letter in enumerate(config.examples):
        if letter not in assets.scenario_texts:
            raise MissingScenarioAsset(letter)
        examples.append(example_block(i, *assets.scenario_texts[letter]))
    emotional = [assets.emotional_block] if config.include_emotional else []
    if emotional_before_examples:
        blocks += emotional + examples
    else:
        blocks += examples + emotional
    blocks.append(assets.final_query)
    return BLOCK_SEPARATOR.join(blocks)


@dataclass(frozen=True)
class Chunk:
    text: str
    oversize: bool = False


_BOUNDARY = re.compile(r"(?<=\n\n)(?=[^\n])")


def split_for_limit(prompt: str, max_chars: int) -> list[Chunk]:
    """Greedily pack blank-line separated blocks into chunks of at most ``max_chars``.

    Each chunk keeps its trailing blank line, so the chunks concatenate back to
    ``prompt``. A block longer than ``max_chars`` becomes its own oversize chunk.
    """
    if max_chars < 1024:
        raise ValueError("max_chars must be at least 1024")
    chunks: list[Chunk] = []
    current = ""
    for block in _BOUNDARY.split(prompt):
        if len(current) + len(block) <= max_chars:
            current += block
            continue
        if current:
            chunks.append(Chunk(current))
        if len(block) > max_chars:
            chunks.append(Chunk(block, oversize=True))
            current = ""
        else:
            current = block
    if current or not chunks:
        chunks.append(Chunk(current))
    return chunks


def prompt_filename(case_id: int) -> str:
    return f"case-{case_id:02d}.txt"


def write_prompts(
    outdir: str | os.PathLike,
    assets: PromptAssets | None = None,
    configs: list[PromptConfig] | None = None,
) -> list[Path]:
    """Write one file per matrix entry.

    Every prompt is assembled before anything touches ``outdir``, so an asset
    error leaves the directory as it was. Files are replaced atomically.
    """
    assets = assets if assets is not None else PromptAssets.load()
    configs = configs if configs is not None else paper_matrix()
    texts = {}
    for c in configs:
        if c.case_id is None:
            raise ValueError("only configs with a case id can be written")
        texts[prompt_filename(c.case_id)] = assemble(c, assets)
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in texts.items():
        target = out / name
        if target.is_file() and target.read_bytes() == text.encode("utf-8"):
            written.append(target)
            continue
        fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{name}.")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
        written.append(target)
    return written

"""Send prompts to a chat-completion endpoint (or a replay store) and run the
returned Symboleo through parse, lint and score."""

from __future__ import annotations

import json
import os
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Callable, Mapping, Sequence

import httpx

from symboleo_kit.lexer import SECTION_KEYWORDS
from symboleo_kit.linter import lint
from symboleo_kit.parser import parse
from symboleo_kit.promptgen import PromptAssets, PromptConfig, assemble, split_for_limit
from symboleo_kit.scoring import Annotation, ScoreReport, merge, score
from symboleo_kit.taxonomy import SECTIONS, Diagnostic

MODES = ("live", "replay", "record")
# Named endpoints for the cross-model runs. Every one speaks the minimal
# chat-completion shape; vendors without it are reached through a compatible
# gateway given by --base-url. The Llama preset has to split long prompts.
ENDPOINT_PRESETS: dict[str, dict] = {
    "gpt-4o": {"model_name": "gpt-4o", "base_url": "https://api.openai.com/v1", "api_key_ref": "OPENAI_API_KEY"},
    "claude": {"model_name": "claude-3-5-haiku", "api_key_ref": "CLAUDE_API_KEY"},
    "gemini": {"model_name": "gemini-1.5-pro-002", "api_key_ref": "GEMINI_API_KEY"},
    "llama": {"model_name": "llama-3.2", "api_key_ref": "LLAMA_API_KEY", "max_prompt_chars": 9000},
    "mistral": {"model_name": "mistral-7b", "api_key_ref": "MISTRAL_API_KEY"},
}


class HarnessError(Exception):
    kind = "error"


class Timeout(HarnessError):
    kind = "timeout"


class TransportFailure(HarnessError):
    kind = "transport"


class AuthFailure(HarnessError):
    kind = "auth"


class MissingFixture(HarnessError):
    kind = "missing-fixture"


class NoCodeFound(HarnessError):
    kind = "no-code"


def bundled_fixtures() -> Path:
    return Path(str(resources.files("symboleo_kit") / "data" / "fixtures"))


@dataclass(frozen=True)
class EndpointConfig:
    model_name: str
    base_url: str = "https://api.openai.com/v1"
    api_key_ref: str | None = None
    timeout_seconds: float = 120.0
    mode: str = "replay"
    fixture_store: Path | None = None
    max_prompt_chars: int | None = None
    name: str | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.timeout_seconds <= 0:
            raise ValueError("timeout_seconds must be positive")
        if self.mode in ("replay", "record") and self.fixture_store is None:
            raise ValueError(f"{self.mode} mode needs a fixture store")
        if self.mode in ("live", "record") and not self.api_key_ref:
            raise ValueError(f"{self.mode} mode needs api_key_ref")
        if self.fixture_store is not None:
            object.__setattr__(self, "fixture_store", Path(self.fixture_store))

    @property
    def identity(self) -> str:
        """Directory name in the fixture store; defaults to the model name."""
        return self.name or self.model_name

    def fixture_path(self, case_id: int) -> Path:
        assert self.fixture_store is not None
        return self.fixture_store / self.identity / f"case-{case_id:02d}.txt"


_store_lock = threading.Lock()


def _chat(messages: list[dict], config: EndpointConfig, key: str, client: httpx.Client) -> str:
    try:
        resp = client.post(
            config.base_url.rstrip("/") + "/chat/completions",
            json={"model": config.model_name, "messages": messages},
            headers={"Authorization": f"Bearer {key}"},
            timeout=config.timeout_seconds,
        )
    except httpx.TimeoutException as exc:
        raise Timeout(f"no response within {config.timeout_seconds}s") from exc
    except httpx.HTTPError as exc:
        raise TransportFailure(str(exc)) from exc
    if resp.status_code in (401, 403):
        raise AuthFailure(f"endpoint rejected credentials (HTTP {resp.status_code})")
    if resp.status_code >= 400:
        raise TransportFailure(f"HTTP {resp.status_code}: {resp.text[:200]}")
    try:
        return resp.json()["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise TransportFailure("malformed chat-completion response") from exc


def send(
    prompt: str | Sequence[str],
    config: EndpointConfig,
    case_id: int,
    *,
    transport: httpx.BaseTransport | None = None,
) -> str:
    """Return the model's response for one case.

    Each call is a fresh conversation. Chunks go out as consecutive user turns
    and the reply to the last one is the response.
    """
    chunks = [prompt] if isinstance(prompt, str) else list(prompt)
    if config.mode == "replay":
        path = config.fixture_path(case_id)
        try:
            return path.read_bytes().decode("utf-8")
        except FileNotFoundError:
            raise MissingFixture(f"no stored response at {path}") from None
    key = os.environ.get(config.api_key_ref or "")
    if not key:
        raise AuthFailure(f"environment variable {config.api_key_ref} is not set")
    messages: list[dict] = []
    reply = ""
    with httpx.Client(transport=transport) as client:
        for chunk in chunks:
            messages.append({"role": "user", "content": chunk})
            reply = _chat(messages, config, key, client)
            messages.append({"role": "assistant", "content": reply})
    if config.mode == "record":
        path = config.fixture_path(case_id)
        with _store_lock:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(reply.encode("utf-8"))
    return reply


_FENCE = re.compile(r"^[ \t]*```[^\n]*\n(.*?)^[ \t]*```", re.S | re.M)
_STARTERS = ("Domain", "Contract")
_HEADS = frozenset(SECTION_KEYWORDS) | {"endDomain", "endContract"}


def _first_word(line: str) -> str:
    m = re.match(r"\s*([A-Za-z]+)", line)
    return m.group(1) if m else ""


def _code_like(line: str) -> bool:
    s = line.strip()
    if not s:
        return False
    return (
        _first_word(s) in _HEADS
        or s.startswith("//")
        or s.endswith((";", ",", "(", ")", "->"))
        or s.split()[-1] in ("and", "or")
    )


def extract_code(raw: str) -> str:
    """Pull the Symboleo source out of a model response.

    Prefers the first fenced block that opens with ``Domain`` or ``Contract``,
    then the first fenced block, then the longest run of statement-shaped lines.
    """
    blocks = [b for b in _FENCE.findall(raw) if b.strip()]
    for b in blocks:
        if _first_word(b.strip().splitlines()[0]) in _STARTERS:
            return b
    if blocks:
        return blocks[0]
    best: list[str] = []
    run: list[str] = []
    for line in raw.splitlines() + [""]:
        if _code_like(line):
            run.append(line)
            continue
        if len(run) > len(best) and any(";" in r for r in run) and any(_first_word(r) in _HEADS for r in run):
            best = run
        run = []
    if not best:
        raise NoCodeFound("response contains no Symboleo code")
    return "\n".join(best) + "\n"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


@dataclass
class RunRecord:
    case_id: int
    endpoint: str
    prompt_text: str
    chunks: list[str] = field(default_factory=list)
    raw_response: str | None = None
    extracted_source: str | None = None
    parse_ok: bool | None = None
    parse_diagnostics: list[Diagnostic] = field(default_factory=list)
    lint_diagnostics: list[Diagnostic] = field(default_factory=list)
    score: ScoreReport | None = None
    errors: list[dict] = field(default_factory=list)
    timestamps: dict[str, str] = field(default_factory=dict)

    @property
    def diagnostics(self) -> list[Diagnostic]:
        return self.parse_diagnostics + self.lint_diagnostics

    @property
    def transport_failed(self) -> bool:
        # A replay-store miss is not a transport problem.
        return any(e["stage"] == "send" and e["kind"] != MissingFixture.kind for e in self.errors)

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "endpoint": self.endpoint,
            "prompt_text": self.prompt_text,
            "chunks": self.chunks,
            "raw_response": self.raw_response,
            "extracted_source": self.extracted_source,
            "parse": None if self.parse_ok is None else {
                "ok": self.parse_ok,
                "diagnostics": [d.record() for d in self.parse_diagnostics],
            },
            "lint_diagnostics": [d.record() for d in self.lint_diagnostics],
            "score": None if self.score is None else {
                **{s.code: self.score.per_section[s] for s in SECTIONS},
                "total": self.score.total,
            },
            "errors": self.errors,
            "timestamps": self.timestamps,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _case_key(case_id: int) -> str:
    return f"case-{case_id:02d}"


def run_case(
    config: PromptConfig,
    endpoint: EndpointConfig,
    assets: PromptAssets,
    annotations: Mapping[str, list[Annotation]] | None = None,
    *,
    transport: httpx.BaseTransport | None = None,
    clock: Callable[[], str] = _now,
) -> RunRecord:
    if config.case_id is None:
        raise ValueError("pipeline configs need a case id")
    rec = RunRecord(config.case_id, endpoint.identity, "")
    rec.timestamps["started"] = clock()

    def failed(stage: str, exc: Exception) -> RunRecord:
        kind = exc.kind if isinstance(exc, HarnessError) else type(exc).__name__
        rec.errors.append({"stage": stage, "kind": kind, "message": str(exc)})
        return finish()

    def finish() -> RunRecord:
        manual = (annotations or {}).get(_case_key(rec.case_id))
        if manual is not None:
            rec.score = score(merge(rec.diagnostics, manual), _case_key(rec.case_id))
        rec.timestamps["finished"] = clock()
        return rec

    try:
        rec.prompt_text = assemble(config, assets)
    except LookupError as exc:
        return failed("assemble", exc)
    payload: str | list[str] = rec.prompt_text
    if endpoint.max_prompt_chars and len(rec.prompt_text) > endpoint.max_prompt_chars:
        rec.chunks = [c.text for c in split_for_limit(rec.prompt_text, endpoint.max_prompt_chars)]
        payload = rec.chunks
    try:
        rec.raw_response = send(payload, endpoint, rec.case_id, transport=transport)
    except HarnessError as exc:
        return failed("send", exc)
    try:
        rec.extracted_source = extract_code(rec.raw_response)
    except NoCodeFound as exc:
        return failed("extract", exc)
    result = parse(rec.extracted_source)
    rec.parse_ok = result.ok
    rec.parse_diagnostics = list(result.diagnostics)
    if result.spec is not None:
        rec.lint_diagnostics = lint(result.spec)
    return finish()


def run_pipeline(
    configs: Sequence[PromptConfig],
    endpoint: EndpointConfig,
    *,
    assets: PromptAssets | None = None,
    annotations: Mapping[str, list[Annotation]] | None = None,
    runs_dir: str | os.PathLike | None = None,
    parallelism: int = 1,
    transport: httpx.BaseTransport | None = None,
    clock: Callable[[], str] = _now,
) -> list[RunRecord]:
    """Run every config and return records in input order.

    A failing case is recorded and the batch moves on. With ``runs_dir`` each
    record is written to ``<runs_dir>/<timestamp>/case-NN/record.json``.
    """
    assets = assets if assets is not None else PromptAssets.load()
    if parallelism < 1:
        raise ValueError("parallelism must be at least 1")

    def one(c: PromptConfig) -> RunRecord:
        return run_case(c, endpoint, assets, annotations, transport=transport, clock=clock)

    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        records = list(pool.map(one, configs))
    if runs_dir is not None and records:
        persist(records, runs_dir)
    return records


def persist(records: Sequence[RunRecord], runs_dir: str | os.PathLike) -> Path:
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")
    root = Path(runs_dir) / stamp
    for rec in records:
        d = root / _case_key(rec.case_id)
        d.mkdir(parents=True, exist_ok=True)
        (d / "record.json").write_text(rec.to_json(), encoding="utf-8", newline="\n")
    return root


def load_record(path: str | os.PathLike) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))

"""Flat ``key = value`` experiment configs.

Grammar, one entry per line::

    # comment
    kind    = sim-sweep
    n       = 3             # with l, the hydrogen level
    l       = 2
    levels  = 1:0, 3:2      # several levels as n:l
    N       = 10..100:10    # comma list; a..b or a..b:step ranges expand
    modes   = 50, 200
    window  = 10, 100
    expect.slope.M50 = -1.1 .. -0.9

Scalars are ints, floats or booleans (true/false); lists are comma
separated.  ``expect.<metric>`` declares lo..hi assertions, either end may be
left empty.  Keys may appear once.
"""

from __future__ import annotations

from pathlib import Path

from pydantic import ValidationError

from .schemas import Expectation, ExperimentConfig

_LISTS = {"N", "modes", "orders", "taus", "levels", "window"}
_INT_LISTS = {"N", "modes", "orders"}
_KEYS = {"kind", "n", "l", "levels", "order", "orders", "taus", "formula", "t", "N", "R", "modes",
         "n_max", "max_loss", "printed", "count", "dim", "seed", "window", "out"}


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key or line."""


def _int_list(key: str, text: str) -> list[int]:
    out: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if ".." in part:
            span, _, step = part.partition(":")
            lo, _, hi = span.partition("..")
            try:
                a, b, s = int(lo), int(hi), int(step or 1)
            except ValueError:
                raise ConfigError(f"{key}: bad range {part!r}") from None
            if s < 1 or b < a:
                raise ConfigError(f"{key}: empty range {part!r}")
            out.extend(range(a, b + 1, s))
        else:
            try:
                out.append(int(part))
            except ValueError:
                raise ConfigError(f"{key}: {part!r} is not an integer") from None
    return out


def _scalar(text: str):
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _range(key: str, text: str) -> Expectation:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ConfigError(f"{key}: expected 'lo .. hi'")
    try:
        return Expectation(metric=key[len("expect."):],
                           lo=float(lo) if lo.strip() else float("-inf"),
                           hi=float(hi) if hi.strip() else float("inf"))
    except ValueError:
        raise ConfigError(f"{key}: bounds must be numbers") from None


def parse_text(text: str) -> dict:
    raw: dict = {}
    expects = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key.startswith("expect."):
            expects.append(_range(key, value))
            continue
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key in _INT_LISTS:
            raw[key] = _int_list(key, value)
        elif key == "levels":
            lv = []
            for part in filter(None, (p.strip() for p in value.split(","))):
                n, sep2, l = part.partition(":")
                if not sep2:
                    raise ConfigError(f"levels: {part!r} is not of the form n:l")
                lv.append({"n": _scalar(n.strip()), "l": _scalar(l.strip())})
            raw[key] = lv
        elif key in _LISTS:
            raw[key] = [p.strip() for p in value.split(",") if p.strip()]
        else:
            raw[key] = _scalar(value)
    if "n" in raw or "l" in raw:
        raw["level"] = {"n": raw.pop("n", None), "l": raw.pop("l", 0)}
    if "window" in raw:
        w = raw["window"]
        if len(w) != 2:
            raise ConfigError("window: expected two numbers")
        raw["window"] = tuple(_scalar(x) for x in w)
    if "taus" in raw:
        raw["taus"] = [str(x) for x in raw["taus"]]
    if "formula" in raw:
        raw["formula"] = str(raw["formula"])
    raw["expect"] = expects
    return raw


def build_config(raw: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        msgs = []
        for err in exc.errors():
            path = ".".join(str(p) for p in err["loc"]) or "config"
            msg = err["msg"].removeprefix("Value error, ")
            msgs.append(msg if err["type"] == "value_error" and not err["loc"] else f"{path}: {msg}")
        raise ConfigError("; ".join(msgs)) from None


def load_config(path: str | Path) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc.strerror}") from None
    return build_config(parse_text(text))

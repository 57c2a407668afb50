"""Command-line front end: ``subshift <command> ...``.

Exit codes: 0 for an answer (true or false), 2 when some question fell
outside the hypotheses under which it is decided, 1 for errors.
"""

from __future__ import annotations

import json
import sys
import time

import click

from . import decide as dec
from . import points as pts
from .core import (
    Alphabet,
    CapExceeded,
    Morphism,
    ParseError,
    SubshiftError,
    load_morphism,
    parse_morphism,
    serialize,
)
from .graph import classify_letters, languages_equal, stabilization_constants
from .langtools import language_factors, member_language, member_shift_language
from .transforms import cobham_normalize, higher_block, primitive_conjugate, rauzy_refine

SCHEMA = "subshift-report/1"
STAGES = ("classify", "decisions", "fixed", "quasi")
DECISIONS = ("aperiodic", "periodic", "fully-recognizable", "irreducible", "minimal")

OK, ERROR, NOT_MET = 0, 1, 2

CAP_EXCEEDED = "cap-exceeded"
SKIPPED = "skipped"


def _emit(obj):
    click.echo(json.dumps(obj, indent=2, ensure_ascii=False))


def _word_json(m: Morphism, w):
    return m.source.render(w)


def _witness(m: Morphism, w):
    if w is None:
        return None
    if isinstance(w, tuple):
        return _word_json(m, w)
    if isinstance(w, int):
        return m.source[w]
    if isinstance(w, (pts.FixedPoint, pts.QuasiFixed, pts.EPPoint)):
        return pts.descriptor_json(w, m.source)
    if isinstance(w, dec.Decomposition):
        return _decomposition_json(w)
    return str(w)


def _decomposition_json(d: dec.Decomposition):
    return {
        "blocks": [d.alpha.target.render(u) for u in d.block_set],
        "beta": d.beta.as_dict(),
        "alpha": d.alpha.as_dict(),
        "reduced": d.reduced().as_dict(),
    }


def _verdict_json(m, v: dec.Verdict):
    out = {"status": v.status}
    if v.witness is not None:
        out["witness"] = _witness(m, v.witness)
    return out


# ------------------------------------------------------------ the report

def _classification_json(m: Morphism):
    cls = classify_letters(m)
    tok = m.source
    st = stabilization_constants(m, cls.growing)
    return {
        "erasable": [tok[a] for a in sorted(cls.erasable)],
        "mortality": {tok[a]: n for a, n in sorted(cls.mex_of.items())},
        "growing": [tok[a] for a in sorted(cls.growing)],
        "types": {tok[a]: sorted(cls.shift_types[a]) for a in range(len(tok))},
        "shift_language": [tok[a] for a in sorted(cls.in_shift_language)],
        "stabilization": {"i": st.i, "p": st.p},
    }


_DECIDERS = {
    "aperiodic": dec.is_aperiodic,
    "periodic": dec.is_periodic_shift,
    "fully-recognizable": dec.is_fully_recognizable,
    "irreducible": dec.is_irreducible,
    "minimal": dec.is_minimal,
}


def _decisions_json(m: Morphism, nonempty: bool):
    out = {}
    for name in DECISIONS:
        if not nonempty:
            out[name] = {"status": SKIPPED, "note": "empty shift"}
            continue
        try:
            out[name] = _verdict_json(m, _DECIDERS[name](m))
        except CapExceeded as exc:
            out[name] = {"status": CAP_EXCEEDED, "note": str(exc)}
    try:
        e = dec.is_elementary(m)
        out["elementary"] = ({"status": "true"} if e is True else
                             {"status": "false", "witness": _decomposition_json(e)})
    except CapExceeded as exc:
        out["elementary"] = {"status": CAP_EXCEEDED, "note": str(exc)}
    return out


def _orbits_json(m: Morphism, orbits, window: int):
    items = []
    for d in orbits:
        item = pts.descriptor_json(d, m.source)
        try:
            item["window"] = pts.origin_window(d, window, window, m.source)
        except CapExceeded:
            item["window"] = None
        items.append(item)
    return {
        "status": "ok" if orbits.complete else CAP_EXCEEDED,
        "power_bound": orbits.power_bound,
        "orbits": items,
    }


def build_report(m: Morphism, skip=(), cap_steps: int = pts.BFS_CAP, cap_window: int = 8,
                 power_bound: int | None = None, timings: bool = False):
    report = {
        "schema": SCHEMA,
        "morphism": {
            "alphabet": list(m.source),
            "rules": m.as_dict(),
            "size": m.size,
        },
    }
    times = {}

    def stage(name, fn):
        if name in skip:
            report[key[name]] = {"status": SKIPPED}
            return
        t0 = time.perf_counter()
        try:
            report[key[name]] = fn()
        except CapExceeded as exc:
            report[key[name]] = {"status": CAP_EXCEEDED, "note": str(exc)}
        times[name] = round(time.perf_counter() - t0, 4)

    key = {"classify": "letters", "decisions": "decisions",
           "fixed": "fixed_points", "quasi": "quasi_fixed_points"}
    cls = classify_letters(m)
    nonempty = bool(cls.in_shift_language)
    report["shift_nonempty"] = nonempty
    report["languages_equal"] = languages_equal(m)
    stage("classify", lambda: _classification_json(m))
    stage("decisions", lambda: _decisions_json(m, nonempty))
    stage("fixed", lambda: _orbits_json(
        m, pts.enumerate_fixed_orbits(m, power_bound, cap_steps), cap_window))
    stage("quasi", lambda: _orbits_json(
        m, pts.enumerate_quasi_fixed_orbits(m, power_bound, cap_steps), cap_window))
    if timings:
        report["timings"] = times
    return report


def report_exit_code(report) -> int:
    decisions = report.get("decisions", {})
    if any(isinstance(v, dict) and v.get("status") == dec.HYPOTHESIS_NOT_MET
           for v in decisions.values()):
        return NOT_MET
    return OK


def _report_text(report) -> str:
    lines = []
    mor = report["morphism"]
    lines.append("morphism: " + ", ".join(f"{a}->{img}" for a, img in mor["rules"].items()))
    lines.append(f"size: {mor['size']}")
    lines.append(f"shift non-empty: {str(report['shift_nonempty']).lower()}")
    lines.append(f"languages equal: {str(report['languages_equal']).lower()}")
    letters = report.get("letters", {})
    if "types" in letters:
        lines.append("letters:")
        for a, ts in letters["types"].items():
            tags = []
            if a in letters["erasable"]:
                tags.append(f"erasable({letters['mortality'][a]})")
            if a in letters["growing"]:
                tags.append("growing")
            t = "{" + ",".join(ts) + "}"
            lines.append(f"  {a}: types {t} {' '.join(tags)}".rstrip())
    decisions = report.get("decisions", {})
    if "status" in decisions:
        lines.append(f"decisions: {decisions['status']}")
    else:
        lines.append("decisions:")
        for name, v in decisions.items():
            extra = ""
            if "witness" in v and isinstance(v["witness"], str):
                extra = f" (witness {v['witness']})"
            lines.append(f"  {name}: {v['status']}{extra}")
    for key, title in (("fixed_points", "fixed points"), ("quasi_fixed_points", "quasi-fixed points")):
        sec = report.get(key, {})
        if "orbits" not in sec:
            lines.append(f"{title}: {sec.get('status')}")
            continue
        lines.append(f"{title}: {len(sec['orbits'])} ({sec['status']})")
        for d in sec["orbits"]:
            lines.append(f"  {d['shape']} power {d.get('power', '-')}: {d.get('window')}")
    if "timings" in report:
        lines.append("timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in report["timings"].items()))
    return "\n".join(lines)


# ------------------------------------------------------------- commands

def _load(path) -> Morphism:
    m = load_morphism(path)
    if not m.is_endomorphism:
        raise SubshiftError("expected an endomorphism")
    return m


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """Decision procedures for substitution shifts."""


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
@click.option("--skip", multiple=True, type=click.Choice(STAGES))
@click.option("--cap-steps", default=pts.BFS_CAP, show_default=True,
              help="Search cap for fixed-point centers.")
@click.option("--cap-window", default=8, show_default=True,
              help="Half-width of printed point windows.")
@click.option("--power-bound", type=int, default=None,
              help="Only list fixed points of powers up to this bound.")
@click.option("--timings", is_flag=True, help="Include stage timings (not deterministic).")
def analyze(path, as_json, skip, cap_steps, cap_window, power_bound, timings):
    """Full report on the morphism in PATH."""
    m = _load(path)
    report = build_report(m, set(skip), cap_steps, cap_window, power_bound, timings)
    click.echo(json.dumps(report, indent=2, ensure_ascii=False) if as_json else _report_text(report))
    return report_exit_code(report)


@cli.command()
@click.argument("prop", metavar="PROPERTY",
                type=click.Choice(DECISIONS + ("elementary", "nonempty", "languages-equal")))
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def decide(prop, path, as_json):
    """Decide one property of the shift."""
    m = _load(path)
    if prop == "nonempty":
        out = {"status": "true" if classify_letters(m).in_shift_language else "false"}
    elif prop == "languages-equal":
        out = {"status": "true" if languages_equal(m) else "false"}
    elif prop == "elementary":
        e = dec.is_elementary(m)
        out = {"status": "true"} if e is True else {"status": "false", "witness": _decomposition_json(e)}
    elif not classify_letters(m).in_shift_language:
        out = {"status": SKIPPED, "note": "empty shift"}
    else:
        out = _verdict_json(m, _DECIDERS[prop](m))
    if as_json:
        _emit({"property": prop, **out})
    else:
        click.echo(out["status"])
        w = out.get("witness")
        if isinstance(w, str):
            click.echo(f"witness: {w}")
        elif isinstance(w, dict) and "blocks" in w:
            click.echo("witness blocks: " + " ".join(w["blocks"]))
    return NOT_MET if out["status"] == dec.HYPOTHESIS_NOT_MET else OK


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.argument("word")
@click.option("--shift", is_flag=True, help="Ask about the shift language instead.")
@click.option("--json", "as_json", is_flag=True)
def member(path, word, shift, as_json):
    """Is WORD a factor of the language (or of the shift)?"""
    m = _load(path)
    w = m.word(word)
    ans = member_shift_language(m, w) if shift else member_language(m, w)
    if as_json:
        _emit({"word": word, "language": "shift" if shift else "morphism", "member": ans})
    else:
        click.echo("true" if ans else "false")
    return OK


def shift_factors(m: Morphism, n: int):
    level = [()]
    for _ in range(n):
        level = [w + (x,) for w in level for x in range(len(m.source))]
        level = [w for w in level if member_shift_language(m, w)]
    return level


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("-n", "length", type=click.IntRange(0), required=True)
@click.option("--shift", is_flag=True, help="Factors of the shift instead.")
@click.option("--json", "as_json", is_flag=True)
def factors(path, length, shift, as_json):
    """List the factors of length N."""
    m = _load(path)
    found = shift_factors(m, length) if shift else language_factors(m, length)
    words = [m.source.render(w) for w in sorted(found)]
    if as_json:
        _emit({"n": length, "language": "shift" if shift else "morphism", "factors": words})
    else:
        for w in words:
            click.echo(w)
    return OK


@cli.command("fixed-points")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--power", "power_bound", type=int, default=None,
              help="Only points fixed by a power up to this bound.")
@click.option("--quasi", is_flag=True, help="List quasi-fixed points instead.")
@click.option("--window", default=8, show_default=True)
@click.option("--cap-steps", default=pts.BFS_CAP, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def fixed_points(path, power_bound, quasi, window, cap_steps, as_json):
    """One descriptor per orbit of two-sided fixed points."""
    m = _load(path)
    fn = pts.enumerate_quasi_fixed_orbits if quasi else pts.enumerate_fixed_orbits
    sec = _orbits_json(m, fn(m, power_bound, cap_steps), window)
    if as_json:
        _emit(sec)
    else:
        for d in sec["orbits"]:
            click.echo(f"{d['shape']} power {d.get('power', '-')}: {d['window']}")
        if sec["status"] != "ok":
            click.echo(sec["status"])
    return OK


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("-k", "k", type=click.IntRange(1), required=True)
@click.option("--json", "as_json", is_flag=True)
def block(path, k, as_json):
    """The k-th higher block presentation."""
    m = _load(path)
    bs = higher_block(m, k)
    if as_json:
        _emit({"k": k, "blocks": [m.source.render(b) for b in bs.blocks],
               "morphism": bs.sigma_k.as_dict()})
    else:
        click.echo(serialize(bs.sigma_k), nl=False)
    return OK


def _load_phi(path, source: Alphabet) -> Morphism:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        phi = parse_morphism(text, target=source)
    except ParseError:
        phi = parse_morphism(text, target=Alphabet(_tokens_in(text)))
    if phi.source != source:
        raise SubshiftError("phi must list the letters of the morphism in the same order")
    return phi


def _tokens_in(text: str):
    seen = []
    rhs = [ln.split("#", 1)[0].split("->", 1)[1] for ln in text.splitlines()
           if "->" in ln.split("#", 1)[0]]
    single = all(len(t) == 1 for r in rhs for t in r.split())
    for r in rhs:
        toks = [c for c in r if not c.isspace()] if single else r.split()
        for t in toks:
            if t not in seen:
                seen.append(t)
    return seen or ["_"]


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--phi", "phi_path", type=click.Path(exists=True, dir_okay=False),
              help="Morphism applied after iterating (default: identity).")
@click.option("--seed", required=True, help="Word on which the morphism is right-prolongable.")
@click.option("--json", "as_json", is_flag=True)
def normalize(path, phi_path, seed, as_json):
    """Replace (morphism, phi) by a non-erasing morphism and a letter map."""
    tau = _load(path)
    phi = _load_phi(phi_path, tau.source) if phi_path else None
    nz = cobham_normalize(tau, phi, tau.word(seed))
    if as_json:
        _emit({"m": nz.m, "n": nz.n, "letters": list(nz.block_alphabet),
               "gamma": nz.gamma.as_dict(), "zeta": nz.zeta.as_dict(),
               "theta": nz.theta.as_dict(),
               "seed": nz.zeta.source.render(nz.v)})
    else:
        click.echo(f"m = {nz.m}, n = {nz.n}")
        click.echo("zeta:")
        click.echo(serialize(nz.zeta), nl=False)
        click.echo("theta:")
        click.echo(serialize(nz.theta), nl=False)
    return OK


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def primitive(path, as_json):
    """A primitive morphism whose shift is conjugate to a minimal one."""
    m = _load(path)
    tau, phi = primitive_conjugate(m)
    zeta, theta = rauzy_refine(tau, phi)
    if as_json:
        _emit({"tau": tau.as_dict(), "phi": phi.as_dict(),
               "zeta": zeta.as_dict(), "theta": theta.as_dict()})
    else:
        for name, mor in (("tau", tau), ("phi", phi), ("zeta", zeta), ("theta", theta)):
            click.echo(f"{name}:")
            click.echo(serialize(mor), nl=False)
    return OK


def main(argv=None) -> int:
    try:
        code = cli.main(args=argv, prog_name="subshift", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return ERROR
    except click.exceptions.Abort:
        return ERROR
    except (SubshiftError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return ERROR
    return code if isinstance(code, int) else OK


def entry():
    sys.exit(main())

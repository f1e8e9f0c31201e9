"""Configuration-driven experiment runner.

Every runner writes plain CSV/Markdown plus a ``run_log.jsonl`` holding the
search result behind each emitted cell.  Output is deterministic: no
timestamps, sorted JSON keys, and seed-pinned simulations.
"""
from __future__ import annotations

import copy
import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from . import published
from .capacity import (joint_gain_over_sequential, joint_optimal,
                       levers_efficiency_report, optimal_panel, sequential_value)
from .queues import SERVICE_LAWS, QueueSpec, WindowFamily, distribution
from .reward import ANCILLARY_BASES, EconomicParams, net_reward, net_reward_infinite
from .showup import DELAY_MAPS, ShowupModel
from .simulation import SimConfig, simulate
from .window import (REFERENCES, efficiency_gain_md_vs_mm, efficiency_gain_vs_infinite,
                     optimal_window)

LAW_TAGS = {"exponential": "mm", "deterministic": "md"}
TABLE_FILES = {
    ("windows", "exponential"): "table1_windows_mm",
    ("windows", "deterministic"): "table2_windows_md",
    ("gains", "exponential"): "table3_gains_mm",
    ("gains", "deterministic"): "table4_gains_md",
}


class ConfigError(ValueError):
    pass


# ----------------------------------------------------------------- config

def _default_dict():
    text = resources.files("noshow_window").joinpath("data/default.yaml").read_text()
    return yaml.safe_load(text)


def _merge(base, override):
    out = copy.deepcopy(base)
    for key, val in (override or {}).items():
        if isinstance(val, dict) and isinstance(out.get(key), dict) and key != "showup_models":
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


@dataclass
class ExperimentConfig:
    """Validated experiment settings; see ``data/default.yaml`` for the schema."""

    raw: dict = field(default_factory=_default_dict)

    def __post_init__(self):
        self.validate()

    # convenience views
    @property
    def mu(self):
        return float(self.raw["mu"])

    @property
    def lambdas(self):
        return [float(x) for x in self.raw["lambdas"]]

    @property
    def scenarios(self):
        return [(float(t), float(x)) for t, x in self.raw["scenarios"]]

    @property
    def service_laws(self):
        return list(self.raw["service_laws"])

    @property
    def delay_maps(self):
        return list(self.raw["delay_maps"])

    @property
    def columns(self):
        return list(self.raw["table_columns"])

    @property
    def window(self):
        return self.raw["window"]

    @property
    def workers(self):
        return int(self.raw.get("workers", 1))

    def validate(self):
        r = self.raw
        need = ["mu", "lambdas", "scenarios", "service_laws", "delay_maps",
                "showup_models", "table_columns", "window"]
        missing = [k for k in need if k not in r]
        if missing:
            raise ConfigError(f"missing config keys: {missing}")
        if not r["lambdas"] or not r["scenarios"]:
            raise ConfigError("lambdas and scenarios must be non-empty")
        for pair in r["scenarios"]:
            if len(pair) != 2 or min(pair) < 0:
                raise ConfigError(f"scenario {pair} must be a non-negative (theta, xi) pair")
        for law in r["service_laws"]:
            if law not in SERVICE_LAWS:
                raise ConfigError(f"unknown service law {law!r}")
        for dm in r["delay_maps"]:
            if dm not in DELAY_MAPS:
                raise ConfigError(f"unknown delay map {dm!r}")
        if r.get("ancillary_basis", "unused") not in ANCILLARY_BASES:
            raise ConfigError(f"unknown ancillary basis {r['ancillary_basis']!r}")
        names = set(r["showup_models"])
        refs = list(r["table_columns"]) + list(r.get("curves", {}).get("models", []))
        unknown = sorted(set(refs) - names)
        if unknown:
            raise ConfigError(f"undefined show-up models: {unknown}")
        for name in names:
            self.showup(name)
        w = r["window"]
        if w.get("reference", "cap") not in REFERENCES:
            raise ConfigError(f"window.reference must be one of {REFERENCES}")
        if w.get("md_vs_mm_denominator", "reward") not in ("reward", "window"):
            raise ConfigError("window.md_vs_mm_denominator must be 'reward' or 'window'")
        if not 1 <= int(w["k_min"]) <= int(w["k_max"]) or int(w["k_step"]) < 1:
            raise ConfigError("need k_step >= 1 and k_max >= k_min >= 1")
        if any(lam >= self.mu for lam in self.lambdas):
            # T(inf) enters every gain and the unbounded declaration
            raise ConfigError("every lambda must be below mu")

    def showup(self, name, delay_map=None) -> ShowupModel:
        try:
            spec = dict(self.raw["showup_models"][name])
        except KeyError:
            raise ConfigError(f"undefined show-up model {name!r}") from None
        family = spec.pop("family", None)
        spec.pop("stand_in", None)
        kw = dict(label=name, position_offset=int(self.raw.get("position_offset", 0)))
        if delay_map is not None:
            kw["delay_map"] = delay_map
        try:
            if family == "kopach":
                return ShowupModel.kopach(float(spec["p"]), **kw)
            if family == "exponential":
                return ShowupModel.exponential(**kw)
            if family == "saturating":
                return ShowupModel.saturating(float(spec["q_min"]), float(spec["q_max"]),
                                              float(spec["c"]), **kw)
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"show-up model {name!r}: {exc}") from None
        raise ConfigError(f"show-up model {name!r} has unknown family {family!r}")

    def is_stand_in(self, name):
        return bool(self.raw["showup_models"][name].get("stand_in", False))

    def econ(self, theta, xi, overtime_a=0.0):
        return EconomicParams(theta, xi, overtime_a,
                              float(self.raw.get("levers", {}).get("regular_capacity", self.mu)),
                              self.raw.get("ancillary_basis", "unused"))

    def window_kwargs(self):
        w = self.window
        return dict(k_min=int(w["k_min"]), k_max=int(w["k_max"]), k_step=int(w["k_step"]),
                    infinity_tolerance=float(w["infinity_tolerance"]),
                    reference=w.get("reference", "cap"))

    def with_overrides(self, **kw):
        """Copy with CLI-style overrides (``k_step``, ``seed``, ``delay_maps``)."""
        raw = copy.deepcopy(self.raw)
        if kw.get("k_step") is not None:
            raw["window"]["k_step"] = int(kw["k_step"])
        if kw.get("seed") is not None:
            raw.setdefault("simulation", {})["seed"] = int(kw["seed"])
        if kw.get("delay_maps") is not None:
            raw["delay_maps"] = list(kw["delay_maps"])
        return ExperimentConfig(raw)


def load_config(path=None) -> ExperimentConfig:
    """Defaults overlaid with the YAML file at ``path`` (if any)."""
    raw = _default_dict()
    if path is not None:
        with open(path) as fh:
            user = yaml.safe_load(fh) or {}
        if not isinstance(user, dict):
            raise ConfigError("config file must hold a mapping")
        raw = _merge(raw, user)
    return ExperimentConfig(raw)


# ----------------------------------------------------------------- helpers

def _fmt_k(k):
    return "inf" if k is None else str(int(k))


def _fmt_gain(x):
    return f"{x:.2f}"


def _error_code(exc):
    return f"ERR:{type(exc).__name__}"


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _write_markdown(path, title, header, rows):
    lines = [f"# {title}", "", "| " + " | ".join(header) + " |",
             "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def _write_jsonl(path, records):
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _map_pool(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


# ----------------------------------------------------------------- windows

def _window_group(job):
    """All (scenario, column) cells sharing one (law, lam, delay map) queue solve."""
    cfg, law, lam, delay_map = job
    wkw = cfg.window_kwargs()
    out = []
    try:
        family = WindowFamily(lam, cfg.mu, law, wkw["k_max"])
    except Exception as exc:  # noqa: BLE001 - recorded per cell
        family, fam_err = None, exc
    for theta, xi in cfg.scenarios:
        econ = cfg.econ(theta, xi)
        for name in cfg.columns:
            rec = dict(law=law, lam=lam, delay_map=delay_map, theta=theta, xi=xi, model=name)
            try:
                if family is None:
                    raise fam_err
                res = optimal_window(law, lam, cfg.mu, econ, cfg.showup(name, delay_map),
                                     family=family, **wkw)
                t_inf = res.t_at_infinity
                exact = 0.0 if res.k_best is None else 100.0 * (res.t_best - t_inf) / t_inf
                rec.update(k_star=res.k_star, k_best=res.k_best,
                           t_at_k_star=res.t_at_k_star, t_best=res.t_best,
                           t_at_infinity=t_inf, t_at_cap=res.t_at_cap,
                           reference=res.reference,
                           delta_e=efficiency_gain_vs_infinite(res),
                           delta_e_exact_infinity=max(exact, 0.0),
                           trace=res.trace, error=None)
            except Exception as exc:  # noqa: BLE001 - recorded per cell
                rec.update(k_star=None, error=_error_code(exc), message=str(exc))
            out.append(rec)
    return out


def window_grid(cfg: ExperimentConfig, delay_map):
    """Dict keyed by (law, theta, xi, lam, model) of per-cell records."""
    jobs = [(cfg, law, lam, delay_map) for law in cfg.service_laws for lam in cfg.lambdas]
    grid = {}
    for group in _map_pool(_window_group, jobs, cfg.workers):
        for rec in group:
            grid[(rec["law"], rec["theta"], rec["xi"], rec["lam"], rec["model"])] = rec
    return grid


def md_vs_mm_statistics(cfg: ExperimentConfig, grid, columns=None):
    """Match rate of M/M vs M/D optima and mean reward loss where they differ.

    Two unbounded optima count as a match.  The loss uses the M/D reward at
    the M/M window, read off the M/D trace, and needs both optima finite.
    ``mean_gain_difference_percent`` is the alternative reading: the mean of
    |dE_MD - dE_MM| over all non-matching cells.
    """
    columns = list(columns or published.KOPACH_COLUMNS)
    denom = cfg.window.get("md_vs_mm_denominator", "reward")
    cells, losses, gain_diffs = [], [], []
    for theta, xi in cfg.scenarios:
        for lam in cfg.lambdas:
            for name in columns:
                m = grid.get(("exponential", theta, xi, lam, name))
                d = grid.get(("deterministic", theta, xi, lam, name))
                if m is None or d is None or m["error"] or d["error"]:
                    continue
                km, kd = m["k_star"], d["k_star"]
                cell = dict(theta=theta, xi=xi, lam=lam, model=name, k_mm=km, k_md=kd,
                            match=km == kd, loss=None)
                if km != kd:
                    gain_diffs.append(abs(d["delta_e"] - m["delta_e"]))
                if km is not None and kd is not None and km != kd:
                    trace = dict(d["trace"])
                    cell["loss"] = efficiency_gain_md_vs_mm(trace.__getitem__, kd, km, denom)
                    losses.append(cell["loss"])
                cells.append(cell)
    n = len(cells)
    matches = sum(c["match"] for c in cells)
    finite = [c for c in cells if c["k_mm"] is not None and c["k_md"] is not None]
    return dict(
        cells=n, matches=matches,
        match_rate_percent=100.0 * matches / n if n else float("nan"),
        finite_cells=len(finite),
        finite_match_rate_percent=(100.0 * sum(c["match"] for c in finite) / len(finite)
                                   if finite else float("nan")),
        loss_cells=len(losses),
        mean_loss_percent=float(np.mean(losses)) if losses else float("nan"),
        mean_gain_difference_percent=(float(np.mean(gain_diffs)) if gain_diffs
                                      else float("nan")),
        columns=columns, denominator=denom, detail=cells)


def compare_with_published(cfg: ExperimentConfig, grid):
    """Cell-by-cell comparison of the Kopach columns with the published tables."""
    step = int(cfg.window["k_step"])
    report = {}
    tables = {"exponential": (published.WINDOWS_MM, published.GAINS_MM),
              "deterministic": (published.WINDOWS_MD, published.GAINS_MD)}
    for law, (pub_k, pub_g) in tables.items():
        if law not in cfg.service_laws:
            continue
        n = exact = near = 0
        gain_dev = []
        mismatches = []
        for (theta, xi, lam), ks in pub_k.items():
            for ci, name in enumerate(published.COLUMNS):
                if name not in published.KOPACH_COLUMNS:
                    continue
                rec = grid.get((law, float(theta), float(xi), float(lam), name))
                if rec is None:
                    continue
                n += 1
                got, want = rec["k_star"], ks[ci]
                if got == want:
                    exact += 1
                    near += 1
                else:
                    if got is not None and want is not None and abs(got - want) <= step:
                        near += 1
                    mismatches.append(dict(theta=theta, xi=xi, lam=lam, model=name,
                                           got=got, published=want))
                if not rec["error"]:
                    gain_dev.append(abs(rec["delta_e"] - pub_g[(theta, xi, lam)][ci]))
        report[law] = dict(
            cells=n, exact=exact, within_one_step=near,
            exact_percent=100.0 * exact / n if n else float("nan"),
            within_one_step_percent=100.0 * near / n if n else float("nan"),
            max_gain_deviation=max(gain_dev) if gain_dev else float("nan"),
            mean_gain_deviation=float(np.mean(gain_dev)) if gain_dev else float("nan"),
            window_mismatches=mismatches)
    return report


def ordering_check(cfg: ExperimentConfig, grid, law="exponential",
                   order=("G", "GS", "K0.4", "K0.2")):
    """Scenarios violating K*_G <= K*_GS <= K*_K0.4 <= K*_K0.2 (finite cells only)."""
    if not set(order) <= set(cfg.columns):
        return dict(checked=0, violations=[], skipped="columns missing")
    checked, bad = 0, []
    for theta, xi in cfg.scenarios:
        for lam in cfg.lambdas:
            ks = [grid[(law, theta, xi, lam, n)]["k_star"] for n in order]
            if any(k is None for k in ks):
                continue
            checked += 1
            if any(a > b for a, b in zip(ks, ks[1:])):
                bad.append(dict(theta=theta, xi=xi, lam=lam, windows=dict(zip(order, ks))))
    return dict(checked=checked, violations=bad)


def _table_rows(cfg, grid, law, kind):
    rows = []
    for theta, xi in cfg.scenarios:
        for lam in cfg.lambdas:
            row = [f"{theta:g}", f"{xi:g}", f"{lam:g}"]
            for name in cfg.columns:
                rec = grid[(law, theta, xi, lam, name)]
                if rec["error"]:
                    row.append(rec["error"])
                elif kind == "windows":
                    row.append(_fmt_k(rec["k_star"]))
                else:
                    row.append(_fmt_gain(rec["delta_e"]))
            rows.append(row)
    return rows


def _strip_nan(obj):
    if isinstance(obj, float) and math.isnan(obj):
        return None
    if isinstance(obj, dict):
        return {k: _strip_nan(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_strip_nan(v) for v in obj]
    return obj


def _map_score(summary):
    # exact Kopach window matches first, then closeness of the gains
    cmp = summary["published"]
    exact = sum(v["exact"] for v in cmp.values())
    dev = sum(v["mean_gain_deviation"] for v in cmp.values()
              if not math.isnan(v["mean_gain_deviation"]))
    return (exact, -dev)


@dataclass
class TablesRun:
    grids: dict
    summary: dict
    errors: int


def run_tables(cfg: ExperimentConfig, out_dir) -> TablesRun:
    """Window and gain tables for every configured delay map.

    Each delay map gets its own sub-directory; ``summary.json`` at the top
    holds the M/M vs M/D statistics, the comparison with the published
    Kopach cells and the better-matching delay map.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = ["theta", "xi", "lambda"] + cfg.columns
    grids, per_map, errors = {}, {}, 0
    for dm in cfg.delay_maps:
        grid = window_grid(cfg, dm)
        grids[dm] = grid
        sub = out / dm
        sub.mkdir(exist_ok=True)
        for (kind, law), stem in TABLE_FILES.items():
            if law not in cfg.service_laws:
                continue
            rows = _table_rows(cfg, grid, law, kind)
            _write_csv(sub / f"{stem}.csv", header, rows)
            title = (f"Optimal scheduling window, {LAW_TAGS[law].upper()} service, delay map {dm}"
                     if kind == "windows" else
                     f"Gain over no window (%), {LAW_TAGS[law].upper()} service, delay map {dm}")
            _write_markdown(sub / f"{stem}.md", title, header, rows)
        _write_jsonl(sub / "run_log.jsonl", [grid[k] for k in sorted(grid, key=str)])
        errors += sum(1 for r in grid.values() if r["error"])
        summary = dict(published=compare_with_published(cfg, grid),
                       ordering=ordering_check(cfg, grid) if "exponential" in cfg.service_laws
                       else None)
        if set(cfg.service_laws) >= set(SERVICE_LAWS):
            summary["md_vs_mm"] = md_vs_mm_statistics(cfg, grid)
            summary["md_vs_mm_all_columns"] = md_vs_mm_statistics(cfg, grid, cfg.columns)
        summary["errors"] = sum(1 for r in grid.values() if r["error"])
        per_map[dm] = summary
    best = max(per_map, key=lambda dm: _map_score(per_map[dm]))
    summary = dict(delay_maps=per_map, best_delay_map=best,
                   reference=cfg.window.get("reference", "cap"),
                   stand_in_models=[n for n in cfg.columns if cfg.is_stand_in(n)])
    summary = _strip_nan(summary)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return TablesRun(grids, summary, errors)


# ----------------------------------------------------------------- curves

def curve_table(cfg: ExperimentConfig):
    c = cfg.raw.get("curves", {})
    names = list(c.get("models", cfg.columns))
    step = float(c.get("step", 1))
    delays = np.arange(0.0, float(c.get("max_delay", 365)) + step / 2, step)
    values = {n: np.atleast_1d(cfg.showup(n).at_delay(delays)) for n in names}
    return delays, names, values


def run_curves(cfg: ExperimentConfig, out_dir):
    """Plot-ready show-up curves, one wide and one long CSV."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    delays, names, values = curve_table(cfg)
    wide = [[f"{d:g}"] + [f"{values[n][i]:.10f}" for n in names]
            for i, d in enumerate(delays)]
    _write_csv(out / "curves.csv", ["delay_days"] + names, wide)
    long = [[f"{d:g}", n, f"{values[n][i]:.10f}"] for n in names for i, d in enumerate(delays)]
    _write_csv(out / "curves_long.csv", ["delay_days", "family_label", "showup_prob"], long)
    return delays, values


# ----------------------------------------------------------------- levers

def _lam_steps(seq):
    return tuple(float(s) for s in seq)


def _mu_values(cfg, lv):
    m = float(lv.get("regular_capacity", cfg.mu))
    step = float(lv.get("mu_step", 0.1))
    n = int(round((float(lv.get("mu_max", m + 5)) - m) / step))
    return [round(m + i * step, 10) for i in range(n + 1)]


def _levers_cell(job):
    cfg, law, a, theta, xi, name, group = job
    lv = cfg.raw["levers"]
    econ = cfg.econ(theta, xi, a)
    showup = cfg.showup(name, cfg.delay_maps[0])
    rec = dict(law=law, overtime_a=a, theta=theta, xi=xi, model=name, group=group)
    try:
        if group.endswith("fixed"):
            cap = optimal_panel(law, econ, showup, lam_min=float(lv["lam_min"]),
                                lam_steps=_lam_steps(lv["fixed_mu_lam_steps"]))
        else:
            cap = optimal_panel(law, econ, showup, mu_values=_mu_values(cfg, lv),
                                lam_min=float(lv["lam_min"]),
                                lam_steps=_lam_steps(lv["search_mu_lam_steps"]))
        rep = levers_efficiency_report(cap, econ, showup, **cfg.window_kwargs())
        rec.update(lam_star=cap.lam_star, mu_star=cap.mu_star, objective=cap.objective,
                   k_star=rep.k_star, delta_e=rep.delta_e, alpha=rep.alpha, error=None)
    except Exception as exc:  # noqa: BLE001 - recorded per cell
        rec.update(error=_error_code(exc), message=str(exc))
    return rec


def levers_grid(cfg: ExperimentConfig, groups=published.LEVER_GROUPS, models=None,
                scenarios=None, overtime_a=None):
    lv = cfg.raw["levers"]
    laws = {"mm": "exponential", "md": "deterministic"}
    jobs = []
    for a in (overtime_a or lv["overtime_a"]):
        for group in groups:
            law = laws[group[:2]]
            for theta, xi in (scenarios or cfg.scenarios):
                for name in (models or cfg.columns):
                    jobs.append((cfg, law, float(a), theta, xi, name, group))
    return _map_pool(_levers_cell, jobs, cfg.workers)


def run_levers(cfg: ExperimentConfig, out_dir):
    """Gain from a window after optimising panel size (and capacity)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = levers_grid(cfg)
    groups = published.LEVER_GROUPS
    header = ["overtime_a", "theta", "xi", "model"]
    for g in groups:
        header += [f"dE_{g}", f"alpha_{g}"]
    index = {(r["overtime_a"], r["theta"], r["xi"], r["model"], r["group"]): r for r in records}
    rows = []
    for a in cfg.raw["levers"]["overtime_a"]:
        for theta, xi in cfg.scenarios:
            for name in cfg.columns:
                row = [f"{float(a):g}", f"{theta:g}", f"{xi:g}", name]
                for g in groups:
                    r = index[(float(a), theta, xi, name, g)]
                    if r["error"]:
                        row += [r["error"], r["error"]]
                    else:
                        row += [_fmt_gain(r["delta_e"]), f"{r['alpha']:.3f}"]
                rows.append(row)
    _write_csv(out / "levers.csv", header, rows)
    _write_markdown(out / "levers.md", "Window gain after panel and capacity optimisation",
                    header, rows)
    _write_jsonl(out / "levers_log.jsonl", records)
    return records


# ----------------------------------------------------------------- joint

def _joint_cell(job):
    cfg, law, a, theta, xi, name = job
    jc, lv = cfg.raw["joint"], cfg.raw["levers"]
    econ = cfg.econ(theta, xi, a)
    showup = cfg.showup(name, cfg.delay_maps[0])
    wkw = cfg.window_kwargs()
    rec = dict(law=law, overtime_a=a, theta=theta, xi=xi, model=name)
    try:
        mus = _mu_values(cfg, dict(lv, mu_max=jc["mu_max"], mu_step=jc["mu_step"]))
        step = float(jc["lam_step"])
        n = int(round((float(jc["mu_max"]) - float(jc["lam_min"])) / step))
        lams = [round(float(jc["lam_min"]) + i * step, 10) for i in range(n)]
        cap = optimal_panel(law, econ, showup, mu_values=mus, lam_min=float(jc["lam_min"]),
                            lam_steps=(step,))
        seq, res = sequential_value(cap, econ, showup, **wkw)
        ks = list(range(wkw["k_min"], wkw["k_max"] + 1, wkw["k_step"])) + [None]
        joint = joint_optimal(law, econ, showup, lams, mus, ks,
                              allow_overload=bool(jc.get("allow_overload", False)))
        rec.update(sequential=dict(lam=cap.lam_star, mu=cap.mu_star, k=res.k_star, value=seq),
                   joint=dict(lam=joint.lam_star, mu=joint.mu_star, k=joint.k_star,
                              value=joint.objective),
                   gain_percent=joint_gain_over_sequential(joint, seq), error=None)
    except Exception as exc:  # noqa: BLE001 - recorded per cell
        rec.update(error=_error_code(exc), message=str(exc))
    return rec


def joint_grid(cfg: ExperimentConfig, models=None, scenarios=None):
    jc = cfg.raw["joint"]
    jobs = [(cfg, law, float(a), theta, xi, name)
            for law in jc["service_laws"] for a in jc["overtime_a"]
            for theta, xi in (scenarios or cfg.scenarios)
            for name in (models or published.KOPACH_COLUMNS)]
    return _map_pool(_joint_cell, jobs, cfg.workers)


def joint_summary(records):
    ok = [r for r in records if not r["error"]]
    zero = [r["gain_percent"] for r in ok if r["theta"] == 0]
    pos = [r["gain_percent"] for r in ok if r["theta"] > 0]
    return dict(mean_gain_theta_zero=float(np.mean(zero)) if zero else None,
                mean_gain_theta_positive=float(np.mean(pos)) if pos else None,
                cells=len(records), errors=len(records) - len(ok))


def run_joint(cfg: ExperimentConfig, out_dir):
    """Joint (lam, mu, K) optimum against the sequential procedure."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = joint_grid(cfg)
    header = ["law", "overtime_a", "theta", "xi", "model", "seq_lam", "seq_mu", "seq_k",
              "seq_value", "joint_lam", "joint_mu", "joint_k", "joint_value", "gain_percent"]
    rows = []
    for r in records:
        head = [r["law"], f"{r['overtime_a']:g}", f"{r['theta']:g}", f"{r['xi']:g}", r["model"]]
        if r["error"]:
            rows.append(head + [r["error"]] * (len(header) - len(head)))
            continue
        s, j = r["sequential"], r["joint"]
        rows.append(head + [f"{s['lam']:g}", f"{s['mu']:g}", _fmt_k(s["k"]), f"{s['value']:.6f}",
                            f"{j['lam']:g}", f"{j['mu']:g}", _fmt_k(j["k"]), f"{j['value']:.6f}",
                            f"{r['gain_percent']:.3f}"])
    _write_csv(out / "joint.csv", header, rows)
    _write_markdown(out / "joint.md", "Joint versus sequential optimisation", header, rows)
    _write_jsonl(out / "joint_log.jsonl", records)
    summary = joint_summary(records)
    (out / "joint_summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return records, summary


# ----------------------------------------------------------------- simulation

def _sim_case(job):
    cfg, i, case = job
    sc = cfg.raw.get("simulation", {})
    law = case.get("law", "exponential")
    lam, K = float(case["lam"]), case.get("K")
    econ = cfg.econ(float(case.get("theta", 0)), float(case.get("xi", 0)))
    showup = cfg.showup(case.get("model", cfg.columns[0]), cfg.delay_maps[0])
    rec = dict(case=i, law=law, lam=lam, K=K, model=showup.name, theta=econ.theta, xi=econ.xi)
    try:
        spec = QueueSpec(lam, cfg.mu, None if K is None else int(K), law)
        sim = simulate(SimConfig(spec, showup, econ, horizon=float(sc.get("horizon", 2e5)),
                                 seed=int(sc.get("seed", 12345)) + i,
                                 n_batches=int(sc.get("n_batches", 20))))
        if spec.bounded:
            analytic = net_reward(distribution(spec), econ, showup).total
        else:
            analytic = net_reward_infinite(lam, cfg.mu, econ, showup, law).total
        rec.update(sim_reward=sim.reward, sim_se=sim.reward_se, analytic_reward=analytic,
                   z=(sim.reward - analytic) / sim.reward_se if sim.reward_se > 0 else 0.0,
                   arrivals=sim.arrivals, rejected=sim.rejected, noshows=sim.noshows,
                   error=None)
        rec["_result"] = sim
    except Exception as exc:  # noqa: BLE001 - recorded per case
        rec.update(error=_error_code(exc), message=str(exc))
    return rec


def run_simulation(cfg: ExperimentConfig, out_dir):
    """Simulate each configured case and compare with the analytic reward."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cases = cfg.raw.get("simulation", {}).get("cases", [])
    records = _map_pool(_sim_case, [(cfg, i, c) for i, c in enumerate(cases)], cfg.workers)
    rows = []
    for r in records:
        sim = r.pop("_result", None)
        if sim is not None:
            sim.to_csv(out / f"sim_case{r['case']}_distribution.csv")
        head = [r["case"], r["law"], f"{r['lam']:g}", _fmt_k(r["K"]), r["model"],
                f"{r['theta']:g}", f"{r['xi']:g}"]
        if r["error"]:
            rows.append(head + [r["error"]] * 4)
        else:
            rows.append(head + [f"{r['sim_reward']:.6f}", f"{r['sim_se']:.6f}",
                                f"{r['analytic_reward']:.6f}", f"{r['z']:.2f}"])
    _write_csv(out / "simulation.csv", ["case", "law", "lambda", "K", "model", "theta", "xi",
                                        "sim_reward", "sim_se", "analytic_reward", "z"], rows)
    _write_jsonl(out / "simulation_log.jsonl", records)
    return records

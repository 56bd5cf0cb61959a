"""Command-line front end: every experiment behind one entry point.

Usage model: ``unclonelab MODULE ACTION --flag value ...``. Each leaf
subcommand runs one experiment, prints (or writes) a report in the
schema described in report.py, and exits with

  0  run completed and every checked threshold held
  2  run completed but an acceptance threshold failed
  1  usage error: bad flags, bad config file, invalid parameters

Configuration is flag-driven. A ``--config FILE`` of ``key=value``
lines supplies defaults for the chosen subcommand; explicit flags win,
unknown keys are rejected, and no environment variables are read.
Reruns with the same parameters and seed produce byte-identical report
bodies (the wall_time_s field aside), so report files can be diffed as
golden artifacts. Trials run sequentially as an ordered reduction;
any future parallel backend must preserve that ordering.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import detsig, minischeme, purify
from .coin import ATTACKS, CoinParams, counterfeit_game
from .hilbert import state_to_bytes
from .primitives import pprf_eval, pprf_gen, pprf_key_to_bytes, sha256
from .prs import prs_setup, prs_state
from .report import build_report, render
from .rng import make_rng
from .sde_ue import (
    ADVERSARIES,
    FAIL,
    GAMES,
    SdeConfig,
    one_setup,
    run_game,
    sde_ct_len,
    sde_dec,
    sde_enc,
    sde_kg,
    sde_setup,
    ue_dec,
    ue_ekdk_transform,
    ue_enc,
    ue_kg,
)

# statistical thresholds compare against +/- 3 standard errors; the
# epsilon absorbs float rounding when stderr is exactly zero
_TOL = 1e-12


class UsageError(Exception):
    """Bad flags, bad config file, or invalid parameter values."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run: name, parameters, and reproducibility data."""

    experiment: str
    params: dict
    seed: int | None
    trials: int | None = None
    out: str | None = None
    fmt: str = "json"


_Handler = Callable[[ExperimentConfig], tuple[dict, bool]]

# experiment name -> (handler, exact expected param keys)
EXPERIMENTS: dict[str, tuple[_Handler, frozenset]] = {}


def _experiment(name: str, params: tuple[str, ...]):
    def register(fn: _Handler) -> _Handler:
        EXPERIMENTS[name] = (fn, frozenset(params))
        return fn

    return register


def _parse_hex(text: str, label: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise ValueError(f"{label} must be a hex string") from None


def _hex_width(bits: int) -> int:
    return (bits + 3) // 4


@_experiment("coin demo", ("variant", "id_bits", "mini_n", "attack", "coins"))
def _coin_demo(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    params = CoinParams(id_bits=p["id_bits"], mini_n=p["mini_n"])
    out = counterfeit_game(p["variant"], p["coins"], p["attack"],
                           make_rng(cfg.seed), params=params,
                           trials=cfg.trials)
    envelope = 2.0 ** (-p["mini_n"] / 2)
    # binomial sigma under the null rate; the sample stderr degenerates
    # to zero when every trial agrees
    sigma = (envelope * (1 - envelope) / cfg.trials) ** 0.5
    ok = True
    if p["attack"] == "zero-pad":
        ok = abs(out["success_rate"] - envelope) <= 3 * sigma + _TOL
    elif p["attack"] == "measure-clone":
        ok = out["success_rate"] <= envelope + 3 * sigma + _TOL
    out["envelope"] = envelope
    out["within_envelope"] = ok
    return out, ok


def _detsig_message(p: dict, rng) -> int:
    limit = 1 << p["n"]
    if p["message"] is None:
        return int.from_bytes(rng.bytes(8), "big") % limit
    m = _parse_hex(p["message"], "--message")
    if not 0 <= m < limit:
        raise ValueError(f"message exceeds {p['n']} bits")
    return m


@_experiment("detsig demo", ("n", "tag_bits", "digest_bits", "message"))
def _detsig_demo(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    rng = make_rng(cfg.seed)
    vk, sk = detsig.setup(p["n"], p["tag_bits"], rng,
                          digest_bits=p["digest_bits"])
    m = _detsig_message(p, rng)
    sig = detsig.sign(sk, m).to_bytes()
    verified = detsig.verify(vk, m, sig)
    results = {
        "n": p["n"],
        "vk_root": vk.vk_root.hex(),
        "message": f"{m:0{_hex_width(p['n'])}x}",
        "signature": sig.hex(),
        "signature_len": len(sig),
        "verified": verified,
    }
    return results, verified


@_experiment("detsig sign", ("n", "tag_bits", "digest_bits", "message"))
def _detsig_sign(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    rng = make_rng(cfg.seed)
    vk, sk = detsig.setup(p["n"], p["tag_bits"], rng,
                          digest_bits=p["digest_bits"])
    m = _detsig_message(p, rng)
    sig = detsig.sign(sk, m).to_bytes()
    results = {
        "vk_root": vk.vk_root.hex(),
        "message": f"{m:0{_hex_width(p['n'])}x}",
        "signature": sig.hex(),
        "signature_len": len(sig),
    }
    return results, True


@_experiment("detsig verify",
             ("n", "tag_bits", "digest_bits", "message", "signature"))
def _detsig_verify(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    rng = make_rng(cfg.seed)
    vk, _ = detsig.setup(p["n"], p["tag_bits"], rng,
                         digest_bits=p["digest_bits"])
    if p["message"] is None or p["signature"] is None:
        raise ValueError("verify needs --message and --signature")
    m = _detsig_message(p, rng)
    blob = bytes.fromhex(p["signature"])
    verified = detsig.verify(vk, m, blob)
    results = {
        "vk_root": vk.vk_root.hex(),
        "message": f"{m:0{_hex_width(p['n'])}x}",
        "verified": verified,
    }
    return results, verified


@_experiment("detsig vectors", ("n", "tag_bits", "digest_bits", "count"))
def _detsig_vectors(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    rng = make_rng(cfg.seed)
    vk, sk = detsig.setup(p["n"], p["tag_bits"], rng,
                          digest_bits=p["digest_bits"])
    width = _hex_width(p["n"])
    vectors = []
    for i in range(p["count"]):
        m = i % (1 << p["n"])
        sig = detsig.sign(sk, m)
        if not detsig.verify(vk, m, sig):
            return {"failed_message": f"{m:0{width}x}"}, False
        vectors.append({"message": f"{m:0{width}x}",
                        "signature": sig.to_bytes().hex()})
    results = {
        "n": p["n"],
        "tag_bits": p["tag_bits"],
        "digest_bits": p["digest_bits"],
        "vk_root": vk.vk_root.hex(),
        "signature_len": detsig.signature_len(p["n"], p["digest_bits"],
                                              p["tag_bits"]),
        "vectors": vectors,
    }
    return results, True


@_experiment("purify typedist", ("n", "t"))
def _purify_typedist(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    out = purify.type_vs_haar_distance(p["n"], p["t"])
    ok = out["td_estimate"] <= out["bound"] + _TOL
    out["within_bound"] = ok
    return out, ok


@_experiment("purify compiler", ("n", "t", "payload_qubits", "tol"))
def _purify_compiler(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    q = p["payload_qubits"]

    def generator(z: bytes, rand: bytes):
        return purify.haar_sample(q, make_rng(int.from_bytes(rand, "big")))

    spec = purify.GenStateSpec(b"", 16, q, generator)
    out = purify.compiler_equivalence_check(spec, p["n"], p["t"],
                                            make_rng(cfg.seed))
    ok = out["exact_gap"] <= p["tol"]
    out["within_tolerance"] = ok
    return out, ok


@_experiment("prs demo", ("n",))
def _prs_demo(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    key = prs_setup(p["n"], make_rng(cfg.seed))
    state = prs_state(key)
    results = {
        "n": p["n"],
        "num_amplitudes": 1 << p["n"],
        "state_digest": sha256(state_to_bytes(state)).hex(),
    }
    return results, True


@_experiment("prs overlap", ("k", "ell", "domain_bits"))
def _prs_overlap(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    out = purify.small_range_experiment(p["k"], p["ell"], p["domain_bits"],
                                        cfg.trials, make_rng(cfg.seed))
    ok = out["mean_overlap"] >= out["bound"] - 3 * out["stderr"] - _TOL
    out["within_bound"] = ok
    return out, ok


@_experiment("prs srd", ("k", "ell", "domain"))
def _prs_srd(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    out = purify.classical_srd_experiment(p["k"], p["ell"], p["domain"],
                                          cfg.trials, make_rng(cfg.seed))
    ok = out["advantage"] <= out["envelope"] + 3 * out["stderr"] + _TOL
    out["within_envelope"] = ok
    return out, ok


@_experiment("mini demo", ("n",))
def _mini_demo(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    n = p["n"]
    rng = make_rng(cfg.seed)
    half = n // 2
    note = minischeme.mini_gen(n, rng.bytes(max((half * half + 7) // 8, 1)))
    honest = minischeme.accept_probability(note.sn, note.note)
    kept, forged = minischeme.mini_counterfeit("zero-pad", note.note, rng)
    # the pair is a product state, so the joint acceptance factorizes
    joint = (minischeme.accept_probability(note.sn, kept)
             * minischeme.accept_probability(note.sn, forged))
    ok = abs(honest - 1.0) <= 1e-9
    results = {
        "n": n,
        "sn": note.sn.hex(),
        "honest_accept": honest,
        "zero_pad_joint_accept": joint,
        "counterfeit_bound": 2.0 ** (-n / 2),
    }
    return results, ok


@_experiment("sde demo", ("message_bits", "keys"))
def _sde_demo(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    rng = make_rng(cfg.seed)
    sde = sde_setup(SdeConfig(message_bits=p["message_bits"]), rng)
    sks = [sde_kg(sde, sde.msk, rng) for _ in range(p["keys"])]
    failures = 0
    for value in range(1 << p["message_bits"]):
        ct = sde_enc(sde, sde.pk, value, rng)
        for sk in sks:
            if sde_dec(sde, sk, ct) != value.to_bytes(sde.config.msg_len,
                                                      "big"):
                failures += 1
    foreign_rejected = sde_dec(sde, sks[0],
                               bytes(sde_ct_len(sde.config))) is FAIL
    ok = failures == 0 and foreign_rejected
    results = {
        "message_bits": p["message_bits"],
        "keys": p["keys"],
        "pk_digest": sha256(sde.pk).hex(),
        "tags": [sk.tag.hex() for sk in sks],
        "messages_checked": 1 << p["message_bits"],
        "round_trip_failures": failures,
        "foreign_rejected": foreign_rejected,
        "ciphertext_len": sde_ct_len(sde.config),
    }
    return results, ok


@_experiment("ue demo", ("message_bits",))
def _ue_demo(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    rng = make_rng(cfg.seed)
    sde = sde_setup(SdeConfig(message_bits=p["message_bits"]), rng)
    keys = ue_kg(sde, rng)
    space = 1 << p["message_bits"]
    msg_len = sde.config.msg_len
    failures = 0
    for value in range(space):
        ct = ue_enc(sde, keys.ek, value, rng)
        if ue_dec(sde, keys.dk, ct) != value.to_bytes(msg_len, "big"):
            failures += 1
    shared = rng.bytes(32)
    a = ue_enc(sde, keys.ek, 1, kg_randomness=shared)
    b = ue_enc(sde, keys.ek, 1, kg_randomness=shared)
    determined = (a.masked == b.masked
                  and a.sde_sk.one_pk == b.sde_sk.one_pk)
    wrapper = ue_ekdk_transform(sde)
    ekp, dkp = wrapper.kg(rng)
    ekdk_failures = 0
    for value in range(space):
        wct = wrapper.enc(ekp, value, rng)
        if wrapper.dec(dkp, wct) != value.to_bytes(msg_len, "big"):
            ekdk_failures += 1
    ok = failures == 0 and determined and ekdk_failures == 0 and ekp == dkp
    results = {
        "message_bits": p["message_bits"],
        "messages_checked": space,
        "round_trip_failures": failures,
        "classically_determined": determined,
        "key_ct_len": len(keys.dk),
        "ekdk_keys_equal": ekp == dkp,
        "ekdk_round_trip_failures": ekdk_failures,
    }
    return results, ok


@_experiment("game run", ("name", "q", "gamma", "adversary", "samples"))
def _game_run(cfg: ExperimentConfig) -> tuple[dict, bool]:
    p = cfg.params
    if p["name"] is None:
        raise ValueError("game run needs --name")
    out = run_game(p["name"], p["adversary"], p["q"], p["gamma"],
                   make_rng(cfg.seed), trials=cfg.trials,
                   challenge_samples=p["samples"])
    return out, True


@_experiment("vectors", ())
def _vectors(cfg: ExperimentConfig) -> tuple[dict, bool]:
    rng = make_rng(cfg.seed)
    prf_key = pprf_gen(8, 128, rng)
    vk, sk = detsig.setup(4, 8, rng, digest_bits=8)
    sig = detsig.sign(sk, 5)
    prs_key = prs_setup(4, rng)
    note = minischeme.mini_gen(8, rng.bytes(2))
    one = one_setup(8, rng.bytes(32))
    results = {
        "pprf": {
            "key": pprf_key_to_bytes(prf_key).hex(),
            "evals": [pprf_eval(prf_key, x).hex() for x in range(4)],
        },
        "detsig": {
            "vk_root": vk.vk_root.hex(),
            "message": "5",
            "signature": sig.to_bytes().hex(),
        },
        "prs": {
            "n": 4,
            "state_digest": sha256(state_to_bytes(prs_state(prs_key))).hex(),
        },
        "mini": {"sn": note.sn.hex()},
        "sde": {"one_pk": one.one_pk.hex()},
    }
    return results, True


def run(config: ExperimentConfig) -> int:
    """Run one experiment and emit its report; returns the exit code."""
    entry = EXPERIMENTS.get(config.experiment)
    if entry is None:
        raise UsageError(f"unknown experiment {config.experiment!r}")
    handler, expected = entry
    if set(config.params) != expected:
        raise UsageError(
            f"{config.experiment} takes parameters "
            f"{sorted(expected)}, got {sorted(config.params)}"
        )
    if config.seed is None:
        raise UsageError(f"{config.experiment} needs --seed")
    start = time.perf_counter()
    results, ok = handler(config)
    wall = time.perf_counter() - start
    echo = dict(config.params)
    if config.trials is not None:
        echo["trials"] = config.trials
    report = build_report(config.experiment, echo, results, config.seed, wall)
    text = render(report, config.fmt)
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 2


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="experiment seed (required)")
    parser.add_argument("--out", default=None,
                        help="report file path (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json",
                        help="report format")
    parser.add_argument("--config", default=None,
                        help="key=value file of flag defaults")


_COMMON_DESTS = {"seed", "out", "format", "config", "trials", "_experiment"}


def _module_actions(top, name: str, help_: str):
    sub = top.add_parser(name, help=help_)
    return sub.add_subparsers(dest="_action", metavar="ACTION")


def build_parser() -> tuple[_Parser, dict]:
    parser = _Parser(prog="unclonelab",
                     description="experiment runner and report emitter")
    top = parser.add_subparsers(dest="_module", metavar="COMMAND")
    leaves: dict[str, _Parser] = {}

    def leaf(owner, name: str, experiment: str, help_: str) -> _Parser:
        sub = owner.add_parser(name, help=help_)
        sub.set_defaults(_experiment=experiment)
        leaves[experiment] = sub
        return sub

    coin = _module_actions(top, "coin", "unclonable coin experiments")
    demo = leaf(coin, "demo", "coin demo", "counterfeit game demo")
    demo.add_argument("--variant", choices=("prs", "eqsup"), default="eqsup")
    demo.add_argument("--id-bits", type=int, default=4)
    demo.add_argument("--mini-n", type=int, default=8)
    demo.add_argument("--attack", choices=sorted(ATTACKS), default="zero-pad")
    demo.add_argument("--coins", type=int, default=1,
                      help="coins issued per trial")
    demo.add_argument("--trials", type=int, default=100)
    _add_common(demo)

    sig = _module_actions(top, "detsig", "deterministic signature tools")
    for action, experiment in (("demo", "detsig demo"),
                               ("sign", "detsig sign"),
                               ("verify", "detsig verify"),
                               ("vectors", "detsig vectors")):
        sub = leaf(sig, action, experiment, f"signature {action}")
        sub.add_argument("--n", type=int, default=8, help="message bits")
        sub.add_argument("--tag-bits", type=int, default=16)
        sub.add_argument("--digest-bits", type=int, default=16)
        if action in ("demo", "sign", "verify"):
            sub.add_argument("--message", default=None,
                             help="hex message (demo/sign default: sampled)")
        if action == "verify":
            sub.add_argument("--signature", default=None,
                             help="hex signature blob")
        if action == "vectors":
            sub.add_argument("--count", type=int, default=8,
                             help="number of signed messages")
        _add_common(sub)

    pur = _module_actions(top, "purify", "purification and averaging checks")
    typ = leaf(pur, "typedist", "purify typedist",
               "exact type-state vs Haar-average distance")
    typ.add_argument("--n", type=int, default=4)
    typ.add_argument("--t", type=int, default=2)
    _add_common(typ)
    comp = leaf(pur, "compiler", "purify compiler",
                "purified-compiler equivalence gap")
    comp.add_argument("--n", type=int, default=3)
    comp.add_argument("--t", type=int, default=2)
    comp.add_argument("--payload-qubits", type=int, default=1)
    comp.add_argument("--tol", type=float, default=1e-9)
    _add_common(comp)

    prs_p = _module_actions(top, "prs", "phase-state experiments")
    pdemo = leaf(prs_p, "demo", "prs demo", "phase-state digest")
    pdemo.add_argument("--n", type=int, default=4)
    _add_common(pdemo)
    over = leaf(prs_p, "overlap", "prs overlap",
                "small-range overlap experiment")
    over.add_argument("--k", type=int, default=2)
    over.add_argument("--ell", type=int, default=32)
    over.add_argument("--domain-bits", type=int, default=6)
    over.add_argument("--trials", type=int, default=200)
    _add_common(over)
    srd = leaf(prs_p, "srd", "prs srd",
               "classical small-range distinguisher")
    srd.add_argument("--k", type=int, default=2)
    srd.add_argument("--ell", type=int, default=32)
    srd.add_argument("--domain", type=int, default=4096)
    srd.add_argument("--trials", type=int, default=500)
    _add_common(srd)

    mini = _module_actions(top, "mini", "subspace banknote checks")
    mdemo = leaf(mini, "demo", "mini demo",
                 "mint, verify, and zero-pad forgery odds")
    mdemo.add_argument("--n", type=int, default=8)
    _add_common(mdemo)

    sde = _module_actions(top, "sde", "single-decryptor encryption")
    sdemo = leaf(sde, "demo", "sde demo", "round trips plus foreign reject")
    sdemo.add_argument("--message-bits", type=int, default=4)
    sdemo.add_argument("--keys", type=int, default=2)
    _add_common(sdemo)

    ue = _module_actions(top, "ue", "unclonable encryption")
    udemo = leaf(ue, "demo", "ue demo",
                 "round trips, determinism, ek=dk wrapper")
    udemo.add_argument("--message-bits", type=int, default=4)
    _add_common(udemo)

    game = _module_actions(top, "game", "security game harness")
    grun = leaf(game, "run", "game run", "run one game with an adversary")
    grun.add_argument("--name", choices=GAMES, default=None)
    grun.add_argument("--q", type=int, default=2)
    grun.add_argument("--gamma", type=float, default=0.1)
    grun.add_argument("--adversary", choices=sorted(ADVERSARIES),
                      default="honest-forwarder")
    grun.add_argument("--trials", type=int, default=1)
    grun.add_argument("--samples", type=int, default=8,
                      help="challenge samples per test")
    _add_common(grun)

    vec = leaf(top, "vectors", "vectors", "cross-module golden vectors")
    _add_common(vec)

    return parser, leaves


def _module_actions(top, name: str, help_: str):
    sub = top.add_parser(name, help=help_)
    return sub.add_subparsers(dest="_action", metavar="ACTION")


def _load_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _apply_config_file(leaf: _Parser, path: str) -> None:
    actions = {a.dest: a for a in leaf._actions}
    for key, raw in _load_config_file(path).items():
        dest = key.replace("-", "_")
        if dest in ("help", "config", "_experiment") or dest not in actions:
            raise UsageError(f"unknown parameter {key!r} in config file")
        action = actions[dest]
        try:
            value = (action.type or str)(raw)
        except ValueError:
            raise UsageError(
                f"config file value for {key!r} is invalid: {raw!r}"
            ) from None
        if action.choices is not None and value not in action.choices:
            raise UsageError(
                f"config file value for {key!r} must be one of "
                f"{', '.join(map(str, action.choices))}"
            )
        leaf.set_defaults(**{dest: value})


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    params = {
        k: v for k, v in vars(args).items()
        if k not in _COMMON_DESTS and not k.startswith("_")
    }
    return ExperimentConfig(
        experiment=args._experiment,
        params=params,
        seed=args.seed,
        trials=getattr(args, "trials", None),
        out=args.out,
        fmt=args.format,
    )


def main(argv=None) -> int:
    parser, leaves = build_parser()
    try:
        args = parser.parse_args(argv)
        experiment = getattr(args, "_experiment", None)
        if experiment is None:
            raise UsageError("unclonelab: a subcommand is required "
                             "(see --help)")
        if args.config:
            _apply_config_file(leaves[experiment], args.config)
            args = parser.parse_args(argv)
        return run(_config_from_args(args))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"unclonelab: {exc}", file=sys.stderr)
        return 1

"""Batch command line: parse model/kernel files, dispatch one computation,
emit one deterministic CSV report.

Exit codes by error category: 0 success, 2 parse, 3 validation, 4 horizon,
5 degenerate-assumption, 6 io, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .coefficients import theta_table
from .decomposition import (
    covariance_levels,
    decompose,
    degenerate_cov,
    ustat_norm_lower_constant,
    wor_level_variance_derived,
    wor_level_variance_printed,
)
from .errors import IoError, ParseError, UrnovaError, ValidationError
from .kernels import SymmetricKernel, builtin_kernel, expectation, from_table
from .models import (
    MixtureModel,
    RNG_ALGORITHM,
    UrnModel,
    as_fraction,
    urn_model,
)
from .report import Report, param_hash, render_csv
from .weak_copy import build_weak_copy, verify_weak_copy
from .weak_independence import check_weak_independence, witness_report

EXIT_CODES = {
    "parse": 2,
    "validation": 3,
    "horizon": 4,
    "degenerate-assumption": 5,
    "io": 6,
}


def _rational(value, where: str) -> Fraction:
    try:
        return as_fraction(value)
    except (ValidationError, ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: not a rational: {value!r}") from None


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


def parse_model_file(path):
    """Model files: an urn document with symbols/alpha/c/length, or a
    mixture document carrying just an epsilon."""
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: model document must be an object")
    if "epsilon" in doc:
        return MixtureModel(_rational(doc["epsilon"], f"{path}: epsilon"))
    for key in ("symbols", "alpha", "c", "length"):
        if key not in doc:
            raise ParseError(f"{path}: missing field {key!r}")
    symbols = []
    for i, entry in enumerate(doc["symbols"]):
        if not isinstance(entry, dict) or "label" not in entry:
            raise ParseError(f"{path}: symbols[{i}] needs a label")
        label = entry["label"]
        if "value" in entry and entry["value"] is not None:
            symbols.append((label, _rational(entry["value"], f"{path}: symbols[{i}].value")))
        else:
            symbols.append(label)
    if not isinstance(doc["length"], int):
        raise ParseError(f"{path}: length must be an integer")
    alpha = {
        label: _rational(v, f"{path}: alpha[{label!r}]")
        for label, v in doc["alpha"].items()
    }
    return urn_model(symbols, alpha, _rational(doc["c"], f"{path}: c"), doc["length"])


def parse_kernel_file(path, model, arity=None) -> SymmetricKernel:
    """Kernel files: an explicit multiset table, or a builtin reference
    resolved against the model's alphabet (builtins take their arity from
    the document or from the surrounding command)."""
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: kernel document must be an object")
    if "builtin" in doc:
        name = doc["builtin"]
        size = doc.get("arity", arity)
        if size is None:
            raise ParseError(f"{path}: builtin kernel needs an arity (or pass --M)")
        target = None
        if "multiset" in doc:
            target = _expand_multiset(doc["multiset"], path)
        return builtin_kernel(model.alphabet, size, name, target)
    for key in ("arity", "entries"):
        if key not in doc:
            raise ParseError(f"{path}: missing field {key!r}")
    entries = []
    for i, entry in enumerate(doc["entries"]):
        if "multiset" not in entry or "value" not in entry:
            raise ParseError(f"{path}: entries[{i}] needs multiset and value")
        labels = _expand_multiset(entry["multiset"], path)
        entries.append((labels, _rational(entry["value"], f"{path}: entries[{i}].value")))
    return from_table(model.alphabet, doc["arity"], entries)


def _expand_multiset(doc, path) -> tuple:
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: multiset must map labels to counts")
    labels = []
    for label, count in doc.items():
        if not isinstance(count, int) or count < 0:
            raise ParseError(f"{path}: bad multiplicity for {label!r}")
        labels.extend([label] * count)
    return tuple(labels)


def kernel_to_json(kernel: SymmetricKernel) -> dict:
    entries = []
    for ms, v in kernel.entries:
        counts = {}
        for label in ms:
            counts[label] = counts.get(label, 0) + 1
        entries.append({"multiset": counts, "value": str(v)})
    return {"arity": kernel.arity, "entries": entries}


def _meta(args, extra=None):
    # the hash covers computation parameters; the output location is not one
    config = {
        k: str(v)
        for k, v in sorted(vars(args).items())
        if k not in ("func", "out")
    }
    meta = {
        "tool_version": __version__,
        "param_hash": param_hash(config),
        "seed": getattr(args, "seed", None) if getattr(args, "seed", None) is not None else "",
        "rng": RNG_ALGORITHM,
    }
    if extra:
        meta.update(extra)
    return meta


def _require_urn(model, what: str) -> UrnModel:
    if not isinstance(model, UrnModel):
        raise ValidationError(f"{what} needs an urn model, not a mixture")
    return model


# -- subcommands ---------------------------------------------------------------

def cmd_validate(args):
    model = parse_model_file(args.model)
    rep = Report(_meta(args), ["field", "value"])
    if isinstance(model, MixtureModel):
        rep.add(field="kind", value="mixture")
        rep.add(field="epsilon", value=str(model.epsilon))
    else:
        rep.add(field="kind", value="urn")
        rep.add(field="symbols", value=" ".join(model.alphabet.labels))
        for label, w in model.alpha:
            rep.add(field=f"alpha[{label}]", value=str(w))
        rep.add(field="c", value=str(model.c))
        rep.add(field="length", value=str(model.length))
        rep.add(field="alpha_total", value=str(model.alpha_total))
        rep.add(field="rate", value=str(model.rate))
        rep.add(field="double_extendible", value=str(model.is_double_extendible))
    return rep


def cmd_pmf(args):
    model = parse_model_file(args.model)
    rep = Report(
        _meta(args),
        ["sequence", "ordered_pmf", "multiset_weight"],
        rational_columns=("ordered_pmf", "multiset_weight"),
    )
    if args.seq:
        seq = tuple(args.seq.split(","))
        rep.add(
            sequence=" ".join(seq),
            ordered_pmf=model.joint_pmf(seq),
            multiset_weight=model.multiset_weight(seq),
        )
        return rep
    size = args.M or 1
    for ms in model.alphabet.multisets(size):
        rep.add(
            sequence=" ".join(ms),
            ordered_pmf=model.joint_pmf(ms),
            multiset_weight=model.multiset_weight(ms),
        )
    return rep


def cmd_sample(args):
    model = _require_urn(parse_model_file(args.model), "sampling")
    if args.seed is None:
        raise ValidationError("sample needs --seed for reproducibility")
    n = args.M or model.length
    rep = Report(_meta(args), ["index", "sequence"])
    for i in range(args.count):
        seq = model.sample(n, seed=args.seed + i)
        rep.add(index=i, sequence=" ".join(seq))
    return rep


def cmd_coeffs(args):
    model = _require_urn(parse_model_file(args.model), "coefficient tables")
    if not args.M:
        raise ValidationError("coeffs needs --M")
    table = theta_table(args.M, model.alpha_total, model.c)
    rep = Report(
        _meta(args),
        ["table", "i1", "i2", "i3", "i4", "value"],
        rational_columns=("value",),
    )
    for (n, m, r, p), v in table.phi.items():
        rep.add(table="phi", i1=n, i2=m, i3=r, i4=p, value=v)
    for (q, n, m), v in table.psi.items():
        rep.add(table="psi", i1=q, i2=n, i3=m, value=v)
    for k, v in table.gamma.items():
        rep.add(table="gamma", i1=k, value=v)
    for (k, a), v in table.theta.items():
        rep.add(table="theta", i1=k, i2=a, value=v)
    for (k, a), v in table.theta_star.items():
        rep.add(table="theta_star", i1=k, i2=a, value=v)
    return rep


def cmd_decompose(args):
    model = _require_urn(parse_model_file(args.model), "decomposition")
    if not args.M:
        raise ValidationError("decompose needs --M")
    if not args.kernel:
        raise ValidationError("decompose needs --kernel")
    statistic = parse_kernel_file(args.kernel[0], model, args.M)
    result = decompose(model, statistic, args.M)
    table = theta_table(args.M, model.alpha_total, model.c)
    rep = Report(
        _meta(args),
        ["row", "level", "a", "multiset", "value"],
        rational_columns=("value",),
    )
    rep.add(row="mean", level="", a="", multiset="", value=result.mean)
    for (k, a), v in table.theta.items():
        rep.add(row="theta", level=k, a=a, multiset="", value=v)
        rep.add(row="theta_star", level=k, a=a, multiset="", value=table.theta_star[(k, a)])
    for s, kernel in enumerate(result.kernels, start=1):
        for ms, v in kernel.entries:
            rep.add(row="kernel", level=s, a="", multiset=" ".join(ms), value=v)
    if args.out:
        for s, kernel in enumerate(result.kernels, start=1):
            side = f"{args.out}.level{s}.json"
            try:
                with open(side, "w") as fh:
                    json.dump(kernel_to_json(kernel), fh, indent=1, sort_keys=True)
            except OSError as exc:
                raise IoError(f"cannot write {side}: {exc}") from exc
    return rep


def cmd_covariance(args):
    model = _require_urn(parse_model_file(args.model), "covariance")
    if not args.M:
        raise ValidationError("covariance needs --M")
    if len(args.kernel or ()) != 2:
        raise ValidationError("covariance needs two --kernel files")
    left = parse_kernel_file(args.kernel[0], model, args.M)
    right = parse_kernel_file(args.kernel[1], model, args.M)
    # the identity is stated for centered statistics; center here and record
    mean_left = expectation(model, left)
    mean_right = expectation(model, right)
    left = left.shift(-mean_left)
    right = right.shift(-mean_right)
    levels, total = covariance_levels(model, left, right, args.M)
    rep = Report(
        _meta(args),
        ["row", "level", "value"],
        rational_columns=("value",),
    )
    rep.add(row="mean_left", level="", value=mean_left)
    rep.add(row="mean_right", level="", value=mean_right)
    for s, v in enumerate(levels, start=1):
        rep.add(row="level_term", level=s, value=v)
    rep.add(row="total", level="", value=total)
    rep.add(row="product_moment", level="", value=expectation(model, left.pointwise_product(right)))
    return rep


def cmd_degenerate_cov(args):
    model = _require_urn(parse_model_file(args.model), "degenerate covariance")
    if len(args.kernel or ()) != 2:
        raise ValidationError("degenerate-cov needs two --kernel files")
    left = parse_kernel_file(args.kernel[0], model)
    right = parse_kernel_file(args.kernel[1], model)
    overlap = args.overlap if args.overlap is not None else left.arity
    value = degenerate_cov(model, left, right, overlap)
    rep = Report(_meta(args), ["overlap", "value"], rational_columns=("value",))
    rep.add(overlap=overlap, value=value)
    return rep


def cmd_check_wi(args):
    model = parse_model_file(args.model)
    n_max = args.level or 2
    rep = Report(
        _meta(args, {"scope": f"weakly-independent-up-to-level-{n_max}"}),
        ["level", "row", "basis_index", "overlap", "witness", "value"],
        rational_columns=("value",),
    )
    all_pass = True
    for n in range(1, n_max + 1):
        result = check_weak_independence(model, n)
        all_pass = all_pass and result.passed
        rep.add(level=n, row="summary", basis_index=len(result.basis),
                overlap="", witness="passed" if result.passed else "failed", value="")
        for r in result.unchecked_overlaps:
            rep.add(level=n, row="not-checkable", basis_index="", overlap=r,
                    witness="", value="")
        for v in result.violations:
            rep.add(level=n, row="violation", basis_index=v.basis_index,
                    overlap=v.overlap, witness=" ".join(v.witness), value=v.value)
    return rep


def cmd_counterexample(args):
    if not args.epsilon:
        raise ValidationError("counterexample needs --epsilon")
    eps = _rational(args.epsilon, "--epsilon")
    result = witness_report(eps)
    rep = Report(_meta(args), ["quantity", "value"], rational_columns=("value",))
    rep.add(quantity="epsilon", value=eps)
    rep.add(quantity="E[phi|second=0]", value=result.given_second_zero)
    rep.add(quantity="E[phi|second=1]", value=result.given_second_one)
    rep.add(quantity="E[phi|third=0]", value=result.given_third_zero)
    rep.add(quantity="closed_form", value=result.closed_form)
    rep.add(quantity="passed", value=Fraction(1 if result.passed else 0))
    return rep


def cmd_weak_copy(args):
    model = _require_urn(parse_model_file(args.model), "weak copies")
    if not args.kernel:
        raise ValidationError("weak-copy needs --kernel (the seed statistic)")
    level = args.level or 1
    eta = _rational(args.eta, "--eta") if args.eta else Fraction(1, 2)
    seed_stat = parse_kernel_file(args.kernel[0], model, level + 1)
    tilted = build_weak_copy(model, level, seed_stat, eta)
    result = verify_weak_copy(tilted)
    rep = Report(
        _meta(args, {
            "scale": str(tilted.scale),
            "density_bound": str(result.density_bound),
            "passed": str(result.passed),
        }),
        ["length", "sequence", "base_pmf", "tilted_pmf", "difference"],
        rational_columns=("base_pmf", "tilted_pmf", "difference"),
    )
    import itertools

    for length in range(result.checked_length + 1):
        for seq in itertools.product(model.alphabet.labels, repeat=length):
            base_p = model.joint_pmf(seq)
            tilt_p = tilted.marginal_pmf(seq)
            rep.add(length=length, sequence=" ".join(seq), base_pmf=base_p,
                    tilted_pmf=tilt_p, difference=tilt_p - base_p)
    return rep


def cmd_wor_variance(args):
    if not args.M or not args.draws:
        raise ValidationError("zhao-chen needs --M (population) and --draws (sample)")
    levels = [args.level] if args.level else list(range(1, args.draws + 1))
    rep = Report(
        _meta(args),
        ["population", "sample", "level", "printed", "derived", "agree"],
        rational_columns=("printed", "derived"),
    )
    for i in levels:
        printed = wor_level_variance_printed(args.M, args.draws, i, Fraction(1))
        derived = wor_level_variance_derived(args.M, args.draws, i)
        rep.add(population=args.M, sample=args.draws, level=i,
                printed=printed, derived=derived, agree=printed == derived)
    return rep


def cmd_ustat_bound(args):
    if not args.N:
        raise ValidationError("lemma3 needs --N")
    rep = Report(
        _meta(args),
        ["N", "n", "i", "constant"],
        rational_columns=("constant",),
    )
    pairs = []
    if args.n and args.level:
        pairs = [(args.n, args.level)]
    else:
        for n in range(1, args.N):
            for i in range(1, n + 1):
                pairs.append((n, i))
    for n, i in pairs:
        rep.add(N=args.N, n=n, i=i, constant=ustat_norm_lower_constant(args.N, n, i))
    return rep


COMMANDS = {
    "validate": cmd_validate,
    "pmf": cmd_pmf,
    "sample": cmd_sample,
    "coeffs": cmd_coeffs,
    "decompose": cmd_decompose,
    "covariance": cmd_covariance,
    "degenerate-cov": cmd_degenerate_cov,
    "check-wi": cmd_check_wi,
    "counterexample": cmd_counterexample,
    "weak-copy": cmd_weak_copy,
    "zhao-chen": cmd_wor_variance,
    "lemma3": cmd_ustat_bound,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urnova",
        description="exact conditional calculus and decompositions for urn sequences",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--model")
        p.add_argument("--kernel", action="append")
        p.add_argument("--M", type=int)
        p.add_argument("--level", type=int)
        p.add_argument("--epsilon")
        p.add_argument("--eta")
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--format", choices=["csv"], default="csv")
        p.add_argument("--count", type=int, default=1)
        p.add_argument("--seq")
        p.add_argument("--draws", type=int)
        p.add_argument("--overlap", type=int)
        p.add_argument("--N", type=int)
        p.add_argument("--n", type=int)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
        render_csv(report, args.out)
    except UrnovaError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.category, 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())

from commands import (
    EPSILON,
    FORMAT,
    INVALID_INPUT,
    VERIFICATION_FAILED,
    CommandError,
    CommandRouter,
    arg,
    check_digits,
    check_weight,
    render,
)
from numeric import verify_relation
from reduction import as_relation, epsilon_bits, reduce_dz_mod_pz
from relations import tornheim_expand
from schemas import (
    ExpandModel,
    ReduceOutput,
    latex_reduction,
    latex_sum,
    latex_symbol,
    reduction_entry,
    report_model,
    terms_model,
)
from symbols import torn

router = CommandRouter()


@router.command(
    "reduce",
    arg("-k", "--weight", type=int, default=None, help="weight k (defaults to q + p)"),
    arg("-q", type=int, required=True),
    arg("-p", type=int, required=True),
    EPSILON,
    FORMAT,
    arg("--verify", type=int, default=None, metavar="DIGITS",
        help="certify the result numerically at this many digits"),
    help="reduce zeta(q,p) onto the epsilon generators modulo PZ_k",
)
def cmd_reduce(args) -> str:
    k = args.q + args.p if args.weight is None else args.weight
    check_weight(k)
    if args.q + args.p != k:
        raise CommandError(INVALID_INPUT, f"q + p = {args.q + args.p} does not match weight {k}")
    res = reduce_dz_mod_pz(args.q, args.p, args.epsilon)

    note = None
    if not res.coefficients:
        note = f"{res.input} lies in PZ_{k}"
    report = None
    if args.verify is not None:
        report = verify_relation(as_relation(res), check_digits(args.verify))

    out = ReduceOutput(
        **reduction_entry(res).model_dump(),
        weight=k,
        epsilon=epsilon_bits(res.epsilon),
        note=note,
        verify=report_model(report) if report else None,
    )
    text = [f"{res.input} = {res.coefficients}  (mod PZ_{k})"]
    if note:
        text.append(f"note: {note}")
    text += [f"  {line}" for line in out.trace]
    if report:
        text.append(f"verify: {'pass' if report.passed else 'FAIL'} residual {report.residual:.3g}"
                    f" at {report.digits} digits")
    latex = [latex_reduction(res)]
    payload = render(args.format, out, text, latex)
    if report and not report.passed:
        raise CommandError(VERIFICATION_FAILED, f"{res.input}: verification failed {report.detail}".strip(),
                           payload)
    return payload


@router.command(
    "expand",
    arg("-r", type=int, required=True),
    arg("-q", type=int, required=True),
    arg("-p", type=int, required=True),
    FORMAT,
    help="expand T(r,q,p) into double zeta values",
)
def cmd_expand(args) -> str:
    sym = torn(args.r, args.q, args.p)
    x = tornheim_expand(args.r, args.q, args.p)
    return render(
        args.format,
        ExpandModel(symbol=str(sym), terms=terms_model(x)),
        [f"{sym} = {x}"],
        [f"{latex_symbol(sym)} = {latex_sum(x)}"],
    )

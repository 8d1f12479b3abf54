"""generators, span, relations and dims: read-only listings for one weight."""
from commands import DIGITS, EPSILON, FORMAT, WEIGHT, CommandRouter, arg, check_digits, check_weight, render
from exactsys import nontrivial_equations, span_expression, spanning_set_dz
from reduction import dim_bounds, epsilon_bits, generator_set
from schemas import (
    DimsModel,
    GeneratorsModel,
    SpanModel,
    dims_model,
    equation_model,
    latex_equation,
    latex_sum,
    latex_symbol,
    rational_model,
    symbol_model,
    terms_model,
)
from symbols import FormalSum, dz

router = CommandRouter(common=(WEIGHT, FORMAT))


@router.command("generators", EPSILON, help="the epsilon generator set of weight k")
def cmd_generators(args) -> str:
    k = check_weight(args.weight, minimum=2)
    gens = generator_set(k, args.epsilon)
    model = GeneratorsModel(weight=k, epsilon=epsilon_bits(gens.epsilon),
                            generators=[symbol_model(g) for g in gens.members])
    return render(args.format, model,
                  [str(g) for g in gens.members],
                  [latex_symbol(g) for g in gens.members])


@router.command(
    "span",
    arg("-i", type=int, default=None, help="also express zeta(i, k-i) through the spanning set"),
    DIGITS,
    help="zeta(odd, odd) spanning set of the weight-k double zeta space",
)
def cmd_span(args) -> str:
    k = check_weight(args.weight)
    elements = spanning_set_dz(k)
    model = SpanModel(weight=k, elements=[terms_model(x) for x in elements])
    text = [str(x) for x in elements]
    latex = [latex_sum(x) for x in elements]
    if args.i is not None:
        coeffs = span_expression(k, args.i, check_digits(args.digits))
        target = dz(args.i, k - args.i)
        model.target = symbol_model(target)
        model.expression = [rational_model(c) for c in coeffs]
        combo = " + ".join(f"({c})*[{x}]" for c, x in zip(coeffs, elements) if c)
        text.append(f"{target} = {combo or 0}")
        latex_combo = " + ".join(_latex_term(c, x) for c, x in zip(coeffs, elements) if c)
        latex.append(f"{latex_symbol(target)} = {latex_combo or 0}")
    return render(args.format, model, text, latex)


def _latex_term(c, x: FormalSum) -> str:
    if len(x) == 1:
        return latex_sum(x * c)
    return rf"{c}\left({latex_sum(x)}\right)"


@router.command("relations", DIGITS, help="the nontrivial zeta(odd, odd) equations of weight k")
def cmd_relations(args) -> str:
    k = check_weight(args.weight)
    eqs = nontrivial_equations(k, check_digits(args.digits))
    text = []
    for eq in eqs:
        line = f"i={eq.i}: {eq.as_formal_sum()} = 0"
        if eq.zeta_coefficient:
            line += f"  [{eq.zeta_coefficient}*Z({k}) absorbed]"
        text.append(line)
    return render(args.format, [equation_model(eq) for eq in eqs], text,
                  [latex_equation(eq) for eq in eqs])


@router.command("dims", help="dimension bounds for weight k")
def cmd_dims(args) -> str:
    k = check_weight(args.weight, minimum=2)
    model: DimsModel = dims_model(dim_bounds(k))
    fields = model.model_dump()
    latex = [
        rf"\dim \mathcal{{DM}}_{{{k}}} \le {model.dm_bound}",
        rf"\dim \mathcal{{PZ}}_{{{k}}} \le {model.pz_bound}",
        rf"\dim M_{{{k}}} = {model.mf_dim}",
        rf"\dim \mathcal{{DZ}}_{{{k}}} \le {model.dz_bound}",
    ]
    return render(args.format, model, [f"{name} {value}" for name, value in fields.items()], latex)

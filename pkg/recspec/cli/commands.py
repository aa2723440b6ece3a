"""Subcommand handlers; each writes its artifacts and returns their paths."""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from recspec.cli.exceptions import ConfigError, VerificationFailedError
from recspec.cli.output import write_csv, write_jsonl
from recspec.cli.schemas import (
    ConstructParams,
    DimensionParams,
    HolesParams,
    KacParams,
    LemmaParams,
    PressureParams,
    RecurrenceParams,
    RunConfig,
    SandwichParams,
    ShiftParams,
    SpectrumParams,
)
from recspec.geometry.coding import orbit, point_of
from recspec.geometry.exceptions import CensoredError
from recspec.geometry.families import NAMED_MAPS, load_map, sine_map, two_slope_map
from recspec.geometry.potentials import potential_from_map
from recspec.geometry.recurrence import (
    ball_cylinder_sandwich_check,
    distortion_constants,
    radius_grid,
    recurrence_sandwich_check,
    return_times,
)
from recspec.geometry.schemas import MarkovExpandingMap, side_status
from recspec.insertion.construction import verify_lemma_g
from recspec.insertion.ell import random_ell_sequence
from recspec.insertion.schemas import InsertionSpec
from recspec.services.generators import derive_seed, make_rng, random_symbols
from recspec.spectrum.construction import construct_E_point
from recspec.spectrum.experiments import ae_rate_experiment, dimension_ladder, grid_experiment
from recspec.spectrum.source import sample_chain
from recspec.symbolic.schemas import SubshiftOfFiniteType, Word
from recspec.symbolic.serialization import loads_sft
from recspec.symbolic.shifts import find_connecting_paths, long_return_words
from recspec.thermo.dimension import boundary_removal_schedule, bowen_dimension, dimension_refinement
from recspec.thermo.pressure import equilibrium_state, kac_check, pressure_with_holes
from recspec.thermo.schemas import Potential

logger = logging.getLogger(__name__)

Params = TypeVar("Params", bound=BaseModel)
Handler = Callable[[RunConfig], List[Path]]

SANDWICH_MAP = "slopes:3,4"


def parse_params(model: Type[Params], config: RunConfig) -> Params:
    """:raises ConfigError: when parameters do not validate."""
    try:
        return model(**config.params)
    except ValidationError as error:
        raise ConfigError(str(error))


def resolve_map(text: Optional[str]) -> MarkovExpandingMap:
    """
    Map from a TOML file or a name.

    Names: doubling, cantor3, golden, slopes:A,B, sine:EPS.

    :raises ConfigError: when nothing matches.
    """
    if not text:
        raise ConfigError("A map is required (--map).")
    try:
        if Path(text).is_file():
            return load_map(Path(text))
        if text in NAMED_MAPS:
            return NAMED_MAPS[text]()
        family, _, arguments = text.partition(":")
        if family == "slopes":
            first, second = (float(value) for value in arguments.split(","))
            return two_slope_map(first, second)
        if family == "sine":
            return sine_map(float(arguments or 0.1))
    except ValueError as error:
        raise ConfigError(str(error))
    raise ConfigError(f"Unknown map {text}.")


def resolve_shift(text: str) -> SubshiftOfFiniteType:
    """
    Shift from full:N, golden, or a file written by dumps_sft.

    :raises ConfigError: when nothing matches.
    """
    try:
        if text == "golden":
            return SubshiftOfFiniteType.golden_mean()
        if text.startswith("full:"):
            return SubshiftOfFiniteType.full_shift(int(text[5:]))
        if Path(text).is_file():
            return loads_sft(Path(text).read_text(encoding="utf-8"))
    except ValueError as error:
        raise ConfigError(str(error))
    raise ConfigError(f"Unknown shift {text}.")


def shift_potential(params: ShiftParams, sft: SubshiftOfFiniteType) -> Potential:
    """Bernoulli-type potential from probabilities, else zero."""
    if params.probabilities is None:
        return Potential.constant(sft, 0.0, params.level)
    if len(params.probabilities) != sft.alphabet_size:
        raise ConfigError("one probability per symbol is required")
    return Potential.bernoulli(params.probabilities).refined(sft, params.level)


def run_pressure(config: RunConfig) -> List[Path]:
    params = parse_params(PressureParams, config)
    sft = resolve_shift(params.shift)
    phi = shift_potential(params, sft)
    state = equilibrium_state(sft, phi)
    out = config.output_dir
    artifacts = [
        write_csv(out / "pressure.csv", ("quantity", "value"), [("pressure", state.pressure), ("entropy", state.entropy)]),
        write_csv(out / "potential.csv", ("cylinder", "value"), phi.to_rows()),
    ]
    if params.masses_level:
        rows = [
            (" ".join(str(symbol) for symbol in word), mass)
            for word, mass in sorted(state.cylinder_measure(params.masses_level).items())
        ]
        artifacts.append(write_csv(out / "masses.csv", ("cylinder", "mass"), rows))
    return artifacts


def run_dimension(config: RunConfig) -> List[Path]:
    params = parse_params(DimensionParams, config)
    fmap = resolve_map(config.map_spec)
    estimate = dimension_refinement(fmap, params.level)
    row = (fmap.name, estimate.level, estimate.value, estimate.refinement_gap)
    return [write_csv(config.output_dir / "dimension.csv", ("map", "level", "dimension", "refinement_gap"), [row])]


def run_holes(config: RunConfig) -> List[Path]:
    params = parse_params(HolesParams, config)
    out = config.output_dir
    if params.family == "boundary":
        fmap = resolve_map(config.map_spec)
        schedule = boundary_removal_schedule(fmap, params.n_max)
        rows = [(row.n, row.dimension, row.sub_shift.alphabet_size if row.sub_shift else "") for row in schedule]
        return [write_csv(out / "holes.csv", ("n", "dimension", "blocks"), rows)]
    sft = resolve_map(config.map_spec).sft if config.map_spec else resolve_shift(params.shift)
    phi = shift_potential(params, sft)
    rows = []
    if params.family == "ones":
        for n in range(1, params.n_max + 1):
            holes = [Word.of([1] * n, sft.alphabet_size)]
            if not sft.is_admissible(holes[0]):
                raise ConfigError(f"The block of {n} ones is not admissible.")
            rows.append((n, pressure_with_holes(sft, phi, holes)))
    else:
        cylinder, _ = find_connecting_paths(sft)
        for n in range(2, params.n_max + 1):
            rows.append((n, pressure_with_holes(sft, phi, long_return_words(sft, cylinder, n))))
    return [write_csv(out / "holes.csv", ("n", "pressure"), rows)]


def run_construct(config: RunConfig) -> List[Path]:
    params = parse_params(ConstructParams, config)
    fmap = resolve_map(config.map_spec)
    result = construct_E_point(
        fmap,
        params.alpha,
        params.beta,
        params.n,
        params.horizon,
        config.seed,
        birkhoff_tolerance=params.birkhoff_tolerance,
    )
    out = config.output_dir
    ell = result.ell
    scales = [(int(h), ratio) for h, ratio in result.estimate.samples]
    summary = {
        "alpha": result.alpha,
        "beta": result.beta,
        "scaled_targets": list(result.scaled_targets),
        "point": result.point,
        "lower": result.estimate.lower,
        "upper": result.estimate.upper,
        "policy": result.estimate.policy,
        "achieved_rates": list(result.achieved_rates),
        "marker": result.marker_word.to_string(),
        "last_index": ell.last_index,
        "identity_holds": result.identity_holds,
        "source": result.source,
    }
    artifacts = [
        write_csv(out / "construct.csv", ("h", "ratio"), scales),
        write_csv(out / "ell.csv", ("k", "ell"), ell.to_rows()),
        write_jsonl(out / "summary.jsonl", [summary]),
    ]
    if not result.identity_holds:
        raise VerificationFailedError("repetition identity", len(result.induced_violations) + len(result.base_violations))
    return artifacts


def run_recurrence(config: RunConfig) -> List[Path]:
    params = parse_params(RecurrenceParams, config)
    fmap = resolve_map(config.map_spec)
    out = config.output_dir
    radii = radius_grid(params.r_min_exponent, params.r_max_exponent)
    if params.x is not None:
        points = orbit(fmap, params.x, params.horizon + 1)
        taus = return_times(points, radii)
        rows = [
            (radius, tau, math.log(tau) / -math.log(radius) if tau else None)
            for radius, tau in zip(radii, taus)
        ]
        return [write_csv(out / "recurrence.csv", ("r", "tau", "ratio"), rows)]
    phi = None
    if params.probabilities is not None:
        phi = Potential.bernoulli(params.probabilities)
    report = ae_rate_experiment(
        fmap,
        phi,
        sample_count=params.samples,
        horizon=params.horizon,
        seed=config.seed,
        radii=radii,
        threads=config.threads,
    )
    rows = [(row.index, row.seed, row.slope, row.lower, row.upper) for row in report.rows]
    return [
        write_csv(out / "recurrence.csv", ("index", "seed", "slope", "lower", "upper"), rows),
        write_jsonl(out / "summary.jsonl", [{"median": report.median, "iqr": report.iqr, "target": report.target}]),
    ]


def run_spectrum(config: RunConfig) -> List[Path]:
    params = parse_params(SpectrumParams, config)
    fmap = resolve_map(config.map_spec)
    out = config.output_dir
    ladder = dimension_ladder(fmap, params.n_schedule)
    rows = [(row.n, row.pressure, row.dimension, row.lambda_n, row.entropy, row.note) for row in ladder.rows]
    artifacts = [
        write_csv(out / "ladder.csv", ("n", "pressure", "dimension", "lambda_n", "entropy", "note"), rows),
        write_jsonl(out / "summary.jsonl", [{"full_dimension": ladder.full_dimension, "gap_rate": ladder.gap_rate}]),
    ]
    if params.alphas and params.betas:
        cells = grid_experiment(
            fmap,
            params.alphas,
            params.betas,
            params.n,
            params.horizon,
            seed=config.seed,
            threads=config.threads,
        )
        grid_rows = [
            (cell.index, cell.alpha, cell.beta, cell.seed, cell.lower, cell.upper, cell.identity_holds, cell.error)
            for cell in cells
        ]
        header = ("index", "alpha", "beta", "seed", "lower", "upper", "identity_holds", "error")
        artifacts.append(write_csv(out / "grid.csv", header, grid_rows))
    return artifacts


def _lemma_trial(index: int, params: LemmaParams, seed: int) -> Dict[str, object]:
    trial_seed = derive_seed(seed, index)
    rng = make_rng(trial_seed)
    size = int(rng.integers(2, max(params.alphabet, 2) + 1))
    ell = random_ell_sequence(rng, params.horizon, params.n0)
    spec = InsertionSpec.default(size)
    w = Word(symbols=random_symbols(params.horizon, size, rng), alphabet_size=size)
    report = verify_lemma_g(w, spec, ell, ell.indices)
    return {
        "trial": index,
        "seed": trial_seed,
        "alphabet": size,
        "last_index": ell.last_index,
        "horizon": report.horizon,
        "violations": [violation.k for violation in report.violations],
    }


def run_verify(config: RunConfig) -> List[Path]:
    out = config.output_dir
    if config.check == "lemma-g":
        params = parse_params(LemmaParams, config)

        def trial(index: int) -> Dict[str, object]:
            return _lemma_trial(index, params, config.seed)

        with ThreadPoolExecutor(max_workers=config.threads) as executor:
            records = list(executor.map(trial, range(params.trials)))
        failed = sum(1 for record in records if record["violations"])
        logger.info("lemma-g: %d of %d trials failed", failed, len(records))
        artifacts = [write_jsonl(out / "lemma_g.jsonl", records)]
        if failed:
            raise VerificationFailedError("lemma-g", failed)
        return artifacts
    if config.check == "sandwich":
        return _verify_sandwich(config)
    if config.check == "kac":
        params = parse_params(KacParams, config)
        sft = resolve_shift(params.shift)
        phi = shift_potential(params, sft)
        report = kac_check(sft, phi, sft.word(params.cylinder), params.t_max)
        rows = [(name, getattr(report, name)) for name in ("cylinder_mass", "mean_return_time", "product", "tail_mass")]
        return [write_csv(out / "kac.csv", ("quantity", "value"), rows)]
    raise ConfigError("verify needs one of lemma-g, sandwich, kac")


def _verify_sandwich(config: RunConfig) -> List[Path]:
    params = parse_params(SandwichParams, config)
    fmap = resolve_map(config.map_spec or SANDWICH_MAP)
    distortion = distortion_constants(fmap)
    state = equilibrium_state(fmap.sft, potential_from_map(fmap, bowen_dimension(fmap), 1))
    rows = []
    violations = skipped = 0
    for index in range(params.points):
        word = sample_chain(state, params.horizon, make_rng(derive_seed(config.seed, index)))
        for k in range(1, params.k_max + 1):
            try:
                report = recurrence_sandwich_check(fmap, word, k, distortion)
            except CensoredError:
                rows.append((index, "recurrence", k, "", "", "", "censored", "censored"))
                continue
            violations += not report.holds
            skipped += report.small_holds is None
            rows.append(
                (
                    index,
                    "recurrence",
                    k,
                    report.repetition,
                    report.tau_small,
                    report.tau_large,
                    side_status(report.small_holds),
                    side_status(report.large_holds),
                ),
            )
        x = point_of(fmap, word[: fmap.decode_depth()])
        for n in range(1, params.n_max + 1):
            ball = ball_cylinder_sandwich_check(fmap, x, n, distortion)
            violations += not ball.holds
            skipped += ball.inner_holds is None
            rows.append(
                (
                    index,
                    "ball",
                    n,
                    ball.tight_inner,
                    ball.tight_outer,
                    distortion.kappa,
                    side_status(ball.inner_holds),
                    side_status(ball.outer_holds),
                ),
            )
    logger.info("sandwich: %d rows, %d violations, %d sides skipped", len(rows), violations, skipped)
    header = ("point", "check", "scale", "a", "b", "c", "inner", "outer")
    artifacts = [write_csv(config.output_dir / "sandwich.csv", header, rows)]
    if violations:
        raise VerificationFailedError("sandwich", violations)
    return artifacts


PARAM_MODELS: Dict[str, Type[BaseModel]] = {
    "pressure": PressureParams,
    "dimension": DimensionParams,
    "holes": HolesParams,
    "construct": ConstructParams,
    "recurrence": RecurrenceParams,
    "spectrum": SpectrumParams,
    "lemma-g": LemmaParams,
    "sandwich": SandwichParams,
    "kac": KacParams,
}
MAP_COMMANDS = ("dimension", "construct", "recurrence", "spectrum")


def plan(config: RunConfig) -> Dict[str, Any]:
    """
    Validate a run without computing anything.

    Parameters are parsed with the command's model and the map or shift is
    resolved, as the handler would do first.

    :raises ConfigError: when parameters, map or shift do not resolve.
    :return: validated parameters and the map or shift they apply to.
    """
    name = config.check if config.command == "verify" else config.command
    if name is None:
        raise ConfigError("verify needs one of lemma-g, sandwich, kac")
    params = parse_params(PARAM_MODELS[name], config)
    resolved: Dict[str, Any] = {"params": params.dict(), "map": None, "shift": None}
    needs_map = name in MAP_COMMANDS or (
        isinstance(params, HolesParams) and (params.family == "boundary" or config.map_spec is not None)
    )
    if name == "sandwich" or needs_map:
        fmap = resolve_map(config.map_spec or (SANDWICH_MAP if name == "sandwich" else None))
        resolved["map"] = fmap.name
        sft = fmap.sft
    elif isinstance(params, ShiftParams):
        sft = resolve_shift(params.shift)
        resolved["shift"] = params.shift
    else:
        return resolved
    if isinstance(params, ShiftParams):
        shift_potential(params, sft)
    if isinstance(params, KacParams):
        try:
            sft.word(params.cylinder)
        except ValueError as error:
            raise ConfigError(str(error))
    return resolved


router: Dict[str, Handler] = {
    "pressure": run_pressure,
    "dimension": run_dimension,
    "holes": run_holes,
    "construct": run_construct,
    "recurrence": run_recurrence,
    "spectrum": run_spectrum,
    "verify": run_verify,
}

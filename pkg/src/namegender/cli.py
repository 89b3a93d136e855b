"""Command-line front end.

    namegender infer "Ada Lovelace" --methods ssa,genderize --country GB
    namegender evaluate [DATASET] --mode replay --out-dir reports/
    namegender cache {stats,prune,warm} --cache-file responses.jsonl
    namegender report --out-dir reports/

Exit codes: 0 success, 1 runtime or upstream failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import RunConfig, build_config
from .core import BackendId
from .dataset import read_dataset
from .errors import (
    ConfigError, ContractError, EmptyDatasetError, NameGenderError, ParseError, WebError,
)
from .evaluation import country_breakdown, tally
from .namedb import parse_census_csv, parse_dict_file, parse_ssa_dir
from .pipeline import Backends, Predictor
from .reports import read_country_report, read_method_report, render_table1, render_table2, score_text, write_reports
from .web.cache import ResponseCache
from .web.clients import FaceBackend, FaceClient, GenderizeClient, ImageSearchClient
from .web.transport import Fetcher, FixtureStore, Mode

log = logging.getLogger("namegender")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


def build_backends(config: RunConfig, session=None) -> Backends:
    methods = set(config.methods)
    backends = Backends(use_dict_country=config.use_dict_country)
    if BackendId.SSA in methods:
        backends.ssa = parse_ssa_dir(config.ssa_dir)
    if BackendId.CENSUS in methods:
        backends.census = parse_census_csv(config.census_csv)
    if BackendId.DICT in methods:
        backends.dictionary = parse_dict_file(config.dict_file)

    uses_names = methods & {BackendId.GENDERIZE, BackendId.MIXED1, BackendId.MIXED2}
    uses_faces = methods & {BackendId.FACE, BackendId.MIXED1, BackendId.MIXED2}
    if uses_names or uses_faces:
        fetcher = Fetcher(
            mode=config.mode,
            cache=ResponseCache(config.cache_file) if config.cache_file else None,
            fixtures=FixtureStore(config.fixtures_dir) if config.fixtures_dir else None,
            session=session,
            rate_limits={b: config.rate_for(b) for b in BackendId},
            max_in_flight=config.max_in_flight,
        )
        if uses_names:
            backends.genderize = GenderizeClient(fetcher, config.endpoint_genderize, config.genderize_key)
        if uses_faces:
            backends.face = FaceBackend(
                ImageSearchClient(fetcher, config.endpoint_images, config.images_key),
                FaceClient(fetcher, config.endpoint_face, config.face_key),
                k=config.thumbnails_k,
            )
    return backends


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("configuration")
    g.add_argument("--methods", help="comma-separated subset of ssa,census,dict,genderize,face,mixed1,mixed2")
    g.add_argument("--mode", choices=[m.value for m in Mode])
    g.add_argument("--config", type=Path, help="JSON config file")
    g.add_argument("--demo", action="store_true", help="use the bundled demo databases and fixtures")
    g.add_argument("--cache-file", dest="cache_file", type=Path)
    g.add_argument("--fixtures", dest="fixtures_dir", type=Path)
    g.add_argument("--ssa-dir", dest="ssa_dir", type=Path)
    g.add_argument("--census-csv", dest="census_csv", type=Path)
    g.add_argument("--dict-file", dest="dict_file", type=Path)
    g.add_argument("--endpoint-genderize", dest="endpoint_genderize")
    g.add_argument("--endpoint-face", dest="endpoint_face")
    g.add_argument("--endpoint-images", dest="endpoint_images")
    g.add_argument("--country-column", dest="country_column")
    g.add_argument("--min-country-instances", dest="min_country_instances", type=int)
    g.add_argument("--thumbnails", dest="thumbnails_k", type=int)
    g.add_argument("--rate-limit", dest="rate_limit", type=float, help="requests per second per backend")
    g.add_argument("--max-in-flight", dest="max_in_flight", type=int)
    g.add_argument("--workers", type=int)
    g.add_argument("--ignore-dict-country", dest="use_dict_country", action="store_const", const=False,
                   help="do not pass the country to the dictionary backend")
    g.add_argument("--out-dir", dest="out_dir", type=Path)
    g.add_argument("-v", "--verbose", action="count", default=0)
    return p


def make_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="namegender",
                                     description="Infer gender from names and evaluate inference methods.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("infer", parents=[common], help="infer gender for one name")
    p.add_argument("name")
    p.add_argument("--country")

    p = sub.add_parser("evaluate", parents=[common], help="evaluate methods on a labelled dataset")
    p.add_argument("dataset", nargs="?", type=Path)

    p = sub.add_parser("cache", parents=[common], help="inspect or fill the response cache")
    p.add_argument("action", choices=["stats", "prune", "warm"])
    p.add_argument("dataset", nargs="?", type=Path, help="dataset to warm the cache for")

    sub.add_parser("report", parents=[common], help="print tables from existing report files")
    return parser


def _config(args, demo: bool = False) -> RunConfig:
    flags = dict(vars(args))
    if getattr(args, "dataset", None) is not None:
        flags["dataset_csv"] = args.dataset
    return build_config(flags, config_file=args.config, demo=demo or args.demo)


def cmd_infer(args, out) -> int:
    if not args.name.strip():
        raise ConfigError("name must not be empty")
    config = _config(args).validate()
    country = args.country.upper() if args.country else None
    predictor = Predictor(build_backends(config), config.methods)
    preds = predictor.predict(args.name, country)
    for m in config.methods:
        pred = preds[m]
        print(f"{m.value}\t{pred.label.value}\t{score_text(pred.score)}", file=out)
    return EXIT_OK


def _load_dataset(config: RunConfig):
    if config.dataset_csv is None:
        raise ConfigError("no dataset given")
    return read_dataset(config.dataset_csv, config.country_column)


def cmd_evaluate(args, out) -> int:
    demo = args.dataset is None and args.config is None
    config = _config(args, demo=demo).validate()
    records = _load_dataset(config)
    predictor = Predictor(build_backends(config), config.methods)
    results = predictor.run(records, workers=config.workers)
    tallies = {m: tally(results[m]) for m in config.methods}
    country = country_breakdown((row for m in config.methods for row in results[m]),
                                config.min_country_instances)
    paths = write_reports(config.out_dir, results, tallies, country)
    print(render_table1(tallies), file=out)
    print(render_table2(country), file=out, end="")
    for path in paths:
        log.info("wrote %s", path)
    return EXIT_OK


def cmd_cache(args, out) -> int:
    config = _config(args)
    if config.cache_file is None:
        raise ConfigError("--cache-file is required")
    if args.action in ("stats", "prune") and not config.cache_file.exists():
        raise ConfigError(f"cache file {config.cache_file} does not exist")

    if args.action == "stats":
        cache = ResponseCache(config.cache_file)
        for backend, count in cache.stats().items():
            print(f"{backend.value}\t{count}", file=out)
        print(f"total\t{len(cache)}", file=out)
        if cache.skipped_lines:
            print(f"corrupt\t{cache.skipped_lines}", file=out)
        return EXIT_OK

    if args.action == "prune":
        cache = ResponseCache(config.cache_file)
        dropped = cache.prune()
        print(f"dropped\t{dropped}\nkept\t{len(cache)}", file=out)
        return EXIT_OK

    # warm: fetch everything live so a later replay run needs no network
    config = replace(config, mode=Mode.LIVE, fixtures_dir=None).validate()
    records = _load_dataset(config)
    web = [m for m in config.methods if m in (BackendId.GENDERIZE, BackendId.FACE,
                                              BackendId.MIXED1, BackendId.MIXED2)]
    if not web:
        raise ConfigError("no web methods selected; nothing to warm")
    backends = build_backends(replace(config, methods=tuple(web)))
    Predictor(backends, web).run(records, workers=config.workers)
    cache = ResponseCache(config.cache_file)
    print(f"warmed\t{len(records)} records\nentries\t{len(cache)}", file=out)
    return EXIT_OK


def cmd_report(args, out) -> int:
    config = _config(args)
    method_path = config.out_dir / "method_report.csv"
    country_path = config.out_dir / "country_report.csv"
    for path in (method_path, country_path):
        if not path.exists():
            raise ConfigError(f"{path} not found; run evaluate first")
    print(render_table1(read_method_report(method_path)), file=out)
    print(render_table2(read_country_report(country_path)), file=out, end="")
    return EXIT_OK


COMMANDS = {"infer": cmd_infer, "evaluate": cmd_evaluate, "cache": cmd_cache, "report": cmd_report}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except (ConfigError, ParseError, ContractError, EmptyDatasetError) as exc:
        print(f"namegender: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WebError, NameGenderError, OSError) as exc:
        print(f"namegender: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

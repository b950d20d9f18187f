import argparse
import json
import logging
import sys
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Add the project root directory to Python path to allow absolute imports
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from src.modcalc.claims import Verdict, claim_ids, must_pass_failures, run_claims
from src.modcalc.config_setup import ConfigSetup
from src.modcalc.core_ring import ModcalcError, Modulus, UnknownClaimError
from src.modcalc.digital import digits
from src.modcalc.dioph import dioph_search
from src.modcalc.dlog_cache import configure_default_cache
from src.modcalc.fp_calculus import kernel_I
from src.modcalc.padic_analytic import PrecisionContext, compute_E, find_generator, lm_composite, lm_full, plm
from utils.report_io import claims_document, search_document, write_claims_report, write_search_results

# Set up logging; diagnostics go to stderr, data to stdout or files
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s', stream=sys.stderr)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MUST_PASS = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage errors as exit 1 instead of exiting with 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="modcalc", description="Modular calculus workbench")
    parser.add_argument("--config", default="config/config.json", help="configuration file")
    parser.add_argument("--cache-dir", default=None, help="discrete-log cache directory")
    parser.add_argument("--no-cache", action="store_true", help="keep discrete-log tables in memory only")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    ev = commands.add_parser("eval", help="evaluate one quantity")
    ev.add_argument("what", choices=["lm", "E", "plm", "I", "digits"])
    ev.add_argument("--p", type=int)
    ev.add_argument("--m", type=int, default=1)
    ev.add_argument("--q", type=int, help="composite modulus (lm) or digit base (digits)")
    ev.add_argument("--x", type=int)
    ev.add_argument("--t", type=int, help="kernel index for I")
    ev.add_argument("--n", type=int, default=1, help="number of digits")

    claims = commands.add_parser("claims", help="claims registry")
    claim_commands = claims.add_subparsers(dest="claims_command", required=True)
    run = claim_commands.add_parser("run", help="run claims and write a report")
    which = run.add_mutually_exclusive_group(required=True)
    which.add_argument("--id", action="append", dest="ids", help="claim id (repeatable)")
    which.add_argument("--all", action="store_true", help="every registered claim")
    run.add_argument("--p", type=int)
    run.add_argument("--m", type=int)
    run.add_argument("--q", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--threads", type=int)
    run.add_argument("--timings", action="store_true", default=None, help="record elapsed_ms")
    run.add_argument("--out", help="report path, '-' for stdout")
    claim_commands.add_parser("list", help="list registered claim ids")

    search = commands.add_parser(
        "search", help="exhaustive search for a^p + b^p = c^q",
        description="Exhaustive search for a^p + b^p = c^q. Only primitive rows (gcd(a, b, c) = 1) "
                    "are reported unless --non-primitive is given.")
    search.add_argument("--amax", type=int, required=True)
    search.add_argument("--bmax", type=int)
    search.add_argument("--cmax", type=int, required=True)
    search.add_argument("--p", type=int, nargs="+", required=True)
    search.add_argument("--q", type=int, nargs="+", required=True)
    search.add_argument("--strict", action="store_true", help="p prime, p, q >= 41, pairwise coprime")
    search.add_argument("--non-primitive", action="store_true",
                        help="also report rows with gcd(a, b, c) > 1 (default: primitive rows only)")
    search.add_argument("--no-filters", action="store_true", help="skip the residue pre-filters")
    search.add_argument("--format", choices=["csv", "json"])
    search.add_argument("--out", help="results path, '-' for stdout")

    cache = commands.add_parser("cache", help="discrete-log cache")
    cache.add_argument("action", choices=["inspect", "clear"])
    return parser


class ModcalcApp:
    def __init__(self, args):
        self.args = args
        self.config = ConfigSetup(args.config)
        validation = self.config.validate_config()
        if not validation['valid']:
            raise UsageError("invalid configuration: " + "; ".join(validation['errors']))
        cache_conf = self.config.config['cache']
        self.cache = configure_default_cache(
            args.cache_dir or cache_conf['directory'],
            cache_conf['enabled'] and not args.no_cache,
        )

    def run(self):
        handler = getattr(self, f"cmd_{self.args.command}")
        return handler()

    def cmd_eval(self):
        args = self.args
        what = args.what
        if what == "lm":
            self._need("x")
            if args.q is not None:
                print(lm_composite(args.x, Modulus.of(args.q), self.cache))
                return EXIT_OK
            self._need("p")
            gp = find_generator(PrecisionContext(args.p, args.m))
            print(f"{lm_full(args.x, gp, self.cache)}, e={gp.e.rep}")
        elif what == "E":
            self._need("p")
            print(compute_E(PrecisionContext(args.p, args.m)))
        elif what == "plm":
            self._need("p", "x")
            print(plm(args.x, PrecisionContext(args.p, args.m)))
        elif what == "I":
            self._need("p", "t", "x")
            print(f"{kernel_I(args.p).value(args.t, args.x)} (mod {args.p})")
        elif what == "digits":
            self._need("q", "x")
            vector = digits(args.x, args.q, args.n)
            print(" ".join(str(d) for d in vector.digits) + f" (base {args.q})")
        return EXIT_OK

    def cmd_claims(self):
        args = self.args
        if args.claims_command == "list":
            for claim_id in claim_ids():
                print(claim_id)
            return EXIT_OK

        run = self.config.run_config(threads=args.threads, seed=args.seed, output=args.out,
                                     record_timings=args.timings)
        if run.threads < 1:
            raise UsageError("--threads must be at least 1")
        ids = claim_ids() if args.all else args.ids
        params = {key: getattr(args, key) for key in ("p", "m", "q") if getattr(args, key) is not None}
        reports = run_claims(ids, params, run.guards, run.threads, run.record_timings)

        if run.claims_report == "-":
            sys.stdout.write(claims_document(reports))
        else:
            write_claims_report(reports, run.claims_report)
        counts = {v.value: sum(r.verdict == v for r in reports) for v in Verdict}
        failed = must_pass_failures(reports)
        if run.claims_report != "-":
            print(f"{counts['PASS']} PASS, {counts['FAIL']} FAIL, {counts['SKIP']} SKIP -> {run.claims_report}")
        if failed:
            logger.error(f"Must-pass claims failed: {', '.join(failed)}")
            return EXIT_MUST_PASS
        return EXIT_OK

    def cmd_search(self):
        args = self.args
        run = self.config.run_config(output=args.out, fmt=args.format)
        rows = dioph_search(
            args.amax, args.bmax if args.bmax is not None else args.amax, args.cmax,
            args.p, args.q,
            strict=args.strict,
            primitive=not args.non_primitive,
            use_filters=not args.no_filters,
            max_power_bits=run.guards.max_power_bits,
        )
        if run.search_results == "-":
            sys.stdout.write(search_document(rows, run.format))
        else:
            write_search_results(rows, run.search_results, run.format)
            print(f"{len(rows)} solutions -> {run.search_results}")
        return EXIT_OK

    def cmd_cache(self):
        if self.args.action == "inspect":
            print(json.dumps(self.cache.inspect(), indent=2, sort_keys=True))
        else:
            print(f"Removed {self.cache.clear()} cache files")
        return EXIT_OK

    def _need(self, *names):
        missing = [f"--{n}" for n in names if getattr(self.args, n) is None]
        if missing:
            raise UsageError(f"eval {self.args.what} needs {', '.join(missing)}")


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        return ModcalcApp(args).run()
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_INPUT
    except UnknownClaimError as e:
        logger.error(e.args[0] if e.args else "unknown claim")
        return EXIT_INPUT
    except ModcalcError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

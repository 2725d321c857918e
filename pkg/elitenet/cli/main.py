import argparse
import logging
import sys
from typing import *

from pydantic import ValidationError

from elitenet import __version__
from elitenet.cli import commands
from elitenet.exceptions import ConfigError, EliteNetError, OutputExistsError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_OUTPUT_EXISTS = 3

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0, help='master seed, stage seeds derive from it (default: 0)')
    common.add_argument('--out', required=True, help='output directory, must not exist unless --force')
    common.add_argument('--force', action='store_true', help='write into an existing output directory')
    common.add_argument('--threads', type=int, default=1, help='concurrent chains or criteria (default: 1)')
    common.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])

    parser = argparse.ArgumentParser(prog='elitenet',
                                     description='Latent cluster analysis of elite follow networks.')
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(__version__))
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('extract', parents=[common], help='select elite users from tweet records')
    p.add_argument('--records', required=True)
    p.add_argument('--min-tweet-pop', type=int, default=2000, help='popularity threshold of a single tweet')
    p.add_argument('--min-count', type=int, help='number of tweets that must reach --min-tweet-pop')
    p.add_argument('--min-total', type=int, help='summed popularity over all tweets of a user')
    p.add_argument('--top', type=int, default=20, help='leaderboard length')
    p.set_defaults(handler=commands.cmd_extract)

    p = sub.add_parser('fit', parents=[common], help='fit the latent cluster random effects model')
    p.add_argument('--edges', required=True)
    p.add_argument('--config', help='JSON with "model" and "mcmc" sections')
    p.add_argument('--k', type=int, help='number of clusters, overrides the config')
    p.add_argument('--d', type=int, help='latent dimension, overrides the config')
    p.set_defaults(handler=commands.cmd_fit)

    p = sub.add_parser('select-k', parents=[common], help='compare K by approximate BIC')
    p.add_argument('--edges', required=True)
    p.add_argument('--k-range', default='1..4', help='inclusive range a..b or list a,b,c')
    p.add_argument('--config')
    p.set_defaults(handler=commands.cmd_select_k)

    p = sub.add_parser('robustness', parents=[common], help='repeat the analysis under other elite criteria')
    p.add_argument('--records', required=True)
    p.add_argument('--edges', required=True)
    p.add_argument('--criteria', default='main,a,b,c,d', help='preset names or single:T, count:k:T, total:C')
    p.add_argument('--baseline', default='main')
    p.add_argument('--highlight', action='append', default=[], help='node label to annotate on every latent map')
    p.add_argument('--config')
    p.set_defaults(handler=commands.cmd_robustness)

    p = sub.add_parser('plot', parents=[common], help='render figures of a fit directory')
    p.add_argument('--fit', required=True, help='output directory of the fit command')
    p.add_argument('--highlight', action='append', default=[], help='node label to annotate, repeatable')
    p.add_argument('--render-config')
    p.set_defaults(handler=commands.cmd_plot)

    p = sub.add_parser('wordfreq', parents=[common], help='most frequent content words')
    p.add_argument('--texts', required=True)
    p.add_argument('--column', default='text')
    p.add_argument('--stopwords')
    p.add_argument('--top', type=int, default=15)
    p.set_defaults(handler=commands.cmd_wordfreq)
    return parser


def configure_logging(level: str):
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT, stream=sys.stderr, force=True)
    logging.getLogger('pykka').setLevel(logging.WARNING)


def main(argv: Sequence[str] = None) -> int:
    """
    Run one command.

    :param argv: arguments without the program name, defaults to sys.argv
    :return: exit code
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except OutputExistsError as e:
        print('error: {}'.format(e), file=sys.stderr)
        return EXIT_OUTPUT_EXISTS
    except ValidationError as e:
        print('error: invalid configuration ({} errors)'.format(e.error_count()), file=sys.stderr)
        for err in e.errors():
            print('  {}: {}'.format('.'.join(str(x) for x in err['loc']), err['msg']), file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as e:
        print('error: {}'.format(e), file=sys.stderr)
        return EXIT_USAGE
    except (EliteNetError, OSError) as e:
        logger.error('%s failed: %s', args.command, e)
        print('error: {}'.format(e), file=sys.stderr)
        return EXIT_RUNTIME

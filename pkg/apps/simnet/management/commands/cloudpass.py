import random

from django.core.management import call_command
from django.core.management.base import BaseCommand, CommandError
from django.db import connection
from django.db.migrations.executor import MigrationExecutor

from clouds.models import AirportCloud, EmbassyCloud
from clouds.wire import AirportService, EmbassyService, serve
from simnet.events import emit_report
from simnet.exceptions import RuntimeFault, ScenarioError
from simnet.faults import FaultSpec
from simnet.runner import load_scenario, run

PARSE_ERROR = 1
RUNTIME_FAULT = 2
IO_ERROR = 3


def _read(path):
    try:
        with open(path, encoding='utf-8') as stream:
            return stream.read()
    except OSError as e:
        raise CommandError(f'cannot read {path}: {e}', returncode=IO_ERROR)


def _fault(text):
    try:
        return FaultSpec.parse(text)
    except ValueError as e:
        raise CommandError(f'--fault {text}: {e}', returncode=PARSE_ERROR)


class Command(BaseCommand):
    help = 'Run, validate or serve CloudPass scenarios and clouds.'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)

        run_parser = actions.add_parser('run', help='Run a scenario and write its event log.')
        run_parser.add_argument('--scenario', required=True)
        run_parser.add_argument('--seed', type=int, default=0)
        run_parser.add_argument('--report', help='Report file; stdout when omitted.')
        run_parser.add_argument(
            '--fault', action='append', default=[], metavar='KIND:actor[:key=value,...]')

        validate_parser = actions.add_parser('validate', help='Parse a scenario only.')
        validate_parser.add_argument('--scenario', required=True)

        serve_parser = actions.add_parser('serve', help='Serve one cloud over TCP.')
        serve_parser.add_argument('--role', choices=('embassy', 'airport'), required=True)
        serve_parser.add_argument('--port', type=int, required=True)
        serve_parser.add_argument('--host', default='127.0.0.1')
        serve_parser.add_argument('--authority', default='US-EMB')
        serve_parser.add_argument('--country', default='US')
        serve_parser.add_argument('--airport', default='JFK')
        serve_parser.add_argument('--seed', type=int, default=0)

    def handle(self, *args, **options):
        self.ensure_schema()
        getattr(self, 'handle_' + options['action'])(options)

    def ensure_schema(self):
        # the default database lives in memory, every process starts empty
        executor = MigrationExecutor(connection)
        if executor.migration_plan(executor.loader.graph.leaf_nodes()):
            call_command('migrate', interactive=False, verbosity=0)

    def load(self, path, seed=0):
        try:
            return load_scenario(_read(path), seed)
        except ScenarioError as e:
            raise CommandError(f'{path}: {e.message}', returncode=PARSE_ERROR)
        except ValueError as e:
            raise CommandError(str(e), returncode=PARSE_ERROR)

    def handle_validate(self, options):
        scenario = self.load(options['scenario'])
        self.stdout.write(self.style.SUCCESS(
            f'{options["scenario"]}: {len(scenario.commands)} commands'))

    def handle_run(self, options):
        faults = [_fault(text) for text in options['fault']]
        scenario = self.load(options['scenario'], options['seed'])
        try:
            result = run(scenario, faults)
        except RuntimeFault as fault:
            self.report(fault.result.log, options['report'])
            raise CommandError(str(fault), returncode=RUNTIME_FAULT)
        self.report(result.log, options['report'])
        summary = result.log.summary()['summary']
        if options['report']:
            self.stdout.write(self.style.SUCCESS(
                f'{summary["events"]} events, outcomes {summary["outcomes"]}'))

    def report(self, log, path):
        try:
            emit_report(log, path or self.stdout)
        except OSError as e:
            raise CommandError(f'cannot write {path}: {e}', returncode=IO_ERROR)

    def handle_serve(self, options):
        rng = random.Random(options['seed'])
        if options['role'] == 'embassy':
            cloud = (EmbassyCloud.objects.filter(authority_id=options['authority']).first()
                     or EmbassyCloud.objects.open(options['authority'], options['country'], rng))
            service = EmbassyService(cloud, rng)
        else:
            service = AirportService(AirportCloud.objects.open(options['airport']))
        self.stdout.write(f'{options["role"]} cloud on {options["host"]}:{options["port"]}')
        serve(service, options['port'], options['host'])

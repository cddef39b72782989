"""
Line protocol for running a cloud as a standalone service, see docs/wire.md.

A request is one line `OP arg1 arg2 ...`, byte arguments hex-encoded; the
reply is one line, `OK ...` or `ERR <code>`. Requests are served one at a
time, so each cloud keeps processing atomically.
"""
import json
import logging
import socketserver

from passport.exceptions import CloudPassError
from qrlink.tokens import LinkToken, resolve_link_token

from .exceptions import CloudError
from .models import Booking, EmbassyCloud

logger = logging.getLogger(__name__)


class BadRequest(Exception):
    pass


def _int(text):
    try:
        return int(text)
    except ValueError:
        raise BadRequest(f'{text!r} is not an integer')


def _hex(text):
    try:
        return bytes.fromhex(text)
    except ValueError:
        raise BadRequest('argument is not hex')


def _json_hex(value):
    return json.dumps(value, sort_keys=True, separators=(',', ':')).encode('utf-8').hex()


class CloudService:
    """Dispatches request lines to `op_<name>` methods."""

    def __init__(self, cloud):
        self.cloud = cloud

    def handle_line(self, line):
        parts = line.split()
        if not parts:
            return 'ERR BAD_REQUEST'
        handler = getattr(self, f'op_{parts[0].lower()}', None)
        if handler is None:
            return 'ERR UNKNOWN_OP'
        try:
            result = handler(*parts[1:])
        except CloudPassError as e:
            return f'ERR {e.code}'
        except (BadRequest, TypeError) as e:
            logger.info(f'bad request {parts[0]}: {e}')
            return 'ERR BAD_REQUEST'
        return ' '.join(['OK', *(str(item) for item in result)])

    def op_ping(self):
        return ('PONG',)

    def op_snapshot(self):
        return (_json_hex(self.cloud.export_snapshot()),)


class EmbassyService(CloudService):

    def __init__(self, cloud, rng):
        super().__init__(cloud)
        self.rng = rng

    def op_submit(self, applicant, kind):
        return (self.cloud.submit_application(applicant, kind, self.rng).value,)

    def op_track(self, tracking_id):
        return (self.cloud.track_application(tracking_id),)

    def op_resolve(self, token):
        token = LinkToken.from_wire(token)
        return (token.resource_kind, resolve_link_token(token, self.cloud))

    def op_visa(self, visa_id):
        visa = self.cloud.visas.filter(visa_id=visa_id).first()
        if visa is None:
            raise CloudError('NOT_FOUND', f'no visa {visa_id}')
        return (visa.passport_no, visa.image_hash, visa.status)

    def op_blob(self, digest):
        blob = self.cloud.blobs.filter(content_hash=digest).first()
        if blob is None:
            raise CloudError('NOT_FOUND', f'no blob {digest}')
        return (bytes(blob.data).hex(),)

    def op_revoke(self, visa_id):
        return (self.cloud.revoke_visa(visa_id).status,)


class AirportService(CloudService):

    def op_book(self, passport_no, visa_id, airport, travel_date):
        Booking.objects.book_travel(passport_no, visa_id, airport, _int(travel_date))
        return ('BOOKED',)

    def op_sync(self, date):
        report = self.cloud.daily_sync(
            EmbassyCloud.objects.all(), Booking.objects.manifest(), _int(date))
        return (len(report.upserted), len(report.removed), len(report.dangling))

    def op_replica(self, visa_id):
        entry = self.cloud.replica_entry(visa_id)
        if entry is None:
            raise CloudError('NOT_FOUND', f'{visa_id} is not replicated')
        return entry

    def op_desk_copy(self, visa_id, checkpoint, data, now='0'):
        return (self.cloud.receive_desk_copy(visa_id, _hex(data), checkpoint, _int(now)),)

    def op_compare(self, visa_id, checkpoint):
        return (self.cloud.compare_visa(visa_id, checkpoint),)


class LineHandler(socketserver.StreamRequestHandler):

    def handle(self):
        for raw in self.rfile:
            reply = self.server.service.handle_line(raw.decode('utf-8', 'replace'))
            self.wfile.write(reply.encode('utf-8') + b'\n')


def serve(service, port, host='127.0.0.1'):
    # single-threaded server: one request at a time per cloud
    with socketserver.TCPServer((host, port), LineHandler) as server:
        server.service = service
        logger.info(f'{service.cloud} serving on {host}:{port}')
        server.serve_forever()

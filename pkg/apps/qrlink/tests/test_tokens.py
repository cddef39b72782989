from dataclasses import replace

from django.test import SimpleTestCase

from qrlink.exceptions import QrError
from qrlink.payload import Mode, payload_text
from qrlink.tokens import (LinkToken, ResourceKind, mint_link_token,
                           resolve_link_token, token_from_qr, token_to_qr)


class Authority:
    def __init__(self, authority_id, secret, resources=()):
        self.authority_id = authority_id
        self.secret = secret
        self.resources = set(resources)

    def has_resource(self, kind, resource_id):
        return (str(kind), resource_id) in self.resources


class TestLinkToken(SimpleTestCase):

    def setUp(self):
        self.authority = Authority(
            'US-EMB', b'k' * 32, {(ResourceKind.VISA_IMAGE.value, 'VABC123')})
        self.token = mint_link_token(self.authority, ResourceKind.VISA_IMAGE, 'VABC123')

    def assertCode(self, code, call):
        with self.assertRaises(QrError) as ctx:
            call()
        self.assertEqual(ctx.exception.code, code)

    def test_mint_then_resolve(self):
        self.assertRegex(self.token.signature, r'^[0-9a-f]{64}$')
        self.assertEqual(resolve_link_token(self.token, self.authority), 'VABC123')

    def test_any_altered_field_fails(self):
        for altered in (replace(self.token, resource_id='VABC124'),
                        replace(self.token, resource_kind=ResourceKind.PASSPORT_APP),
                        replace(self.token, signature='0' * 64)):
            self.assertCode('BAD_SIGNATURE',
                            lambda: resolve_link_token(altered, self.authority))

    def test_other_authority(self):
        other = Authority('US-EMB', b'x' * 32, self.authority.resources)
        self.assertCode('BAD_SIGNATURE', lambda: resolve_link_token(self.token, other))

    def test_deleted_resource(self):
        self.authority.resources.clear()
        self.assertCode('UNKNOWN_RESOURCE',
                        lambda: resolve_link_token(self.token, self.authority))

    def test_wire_form(self):
        wire = self.token.to_wire()
        self.assertEqual(wire, wire.lower())
        self.assertEqual(LinkToken.from_wire(wire), self.token)
        for broken in ('zz', wire[:-2], wire + '00', ''):
            self.assertCode('MALFORMED_TOKEN', lambda: LinkToken.from_wire(broken))

    def test_qr_transport(self):
        payload = token_to_qr(self.token)
        self.assertTrue(payload_text(payload).startswith('ALNUM:CP-'))
        self.assertTrue(all(s.mode in (Mode.NUMERIC, Mode.ALPHANUMERIC)
                            for s in payload.segments))
        self.assertEqual(token_from_qr(payload), self.token)
        self.assertEqual(resolve_link_token(token_from_qr(payload), self.authority), 'VABC123')

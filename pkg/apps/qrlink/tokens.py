import binascii
import hashlib
import logging
from dataclasses import dataclass, replace

from django.core.exceptions import ValidationError
from django.db import models
from django.utils.crypto import constant_time_compare
from django.utils.translation import gettext_lazy as _

from passport.encoding import STR, canonical, canonical_deserialize, canonical_serialize
from passport.exceptions import PassportError
from passport.types import HEX_DIGEST_RE

from .exceptions import QrError
from .payload import decode_payload, encode_payload

logger = logging.getLogger(__name__)

QR_TOKEN_PREFIX = 'CP-'


class ResourceKind(models.TextChoices):
    PASSPORT_APP = 'PASSPORT_APP', _('Passport app')
    VISA_IMAGE = 'VISA_IMAGE', _('Visa image')


@canonical(0x20, ('authority_id', STR), ('resource_kind', STR),
           ('resource_id', STR), ('signature', STR))
@dataclass(frozen=True)
class LinkToken:
    authority_id: str
    resource_kind: str
    resource_id: str
    signature: str = ''

    def signed_bytes(self):
        return canonical_serialize(replace(self, signature=''))

    def expected_signature(self, secret):
        return hashlib.sha256(self.signed_bytes() + bytes(secret)).hexdigest()

    def verify(self, secret):
        return constant_time_compare(self.expected_signature(secret), self.signature)

    def to_wire(self):
        return canonical_serialize(self).hex()

    @classmethod
    def from_wire(cls, text):
        try:
            return canonical_deserialize(bytes.fromhex(text), cls)
        except (ValueError, TypeError, binascii.Error, PassportError):
            raise QrError('MALFORMED_TOKEN', 'token does not decode')

    def validate(self):
        if self.resource_kind not in ResourceKind.values:
            raise ValidationError(
                f'unknown resource kind {self.resource_kind!r}', code='resource_kind')
        if self.signature and not HEX_DIGEST_RE.match(self.signature):
            raise ValidationError(
                'signature must be 64 lowercase hex characters', code='hex_digest')


def mint_link_token(authority, kind, resource_id):
    """
    A token for one resource of `authority`, which is anything with an
    `authority_id` and a byte-string `secret`.
    """
    unsigned = LinkToken(authority.authority_id, kind, resource_id)
    return replace(unsigned, signature=unsigned.expected_signature(authority.secret))


def resolve_link_token(token, authority):
    """
    The resource id the token points at. `authority.has_resource(kind, id)`
    decides whether the resource still exists.
    """
    if token.authority_id != authority.authority_id or not token.verify(authority.secret):
        logger.warning(f'bad signature on token for {token.resource_id}')
        raise QrError('BAD_SIGNATURE', 'token signature does not verify')
    if not authority.has_resource(token.resource_kind, token.resource_id):
        raise QrError(
            'UNKNOWN_RESOURCE', f'{token.resource_kind} {token.resource_id} not found')
    return token.resource_id


def token_to_qr(token):
    # upper-case hex stays inside the alphanumeric set
    return encode_payload(QR_TOKEN_PREFIX + token.to_wire().upper())


def token_from_qr(payload):
    text = decode_payload(payload)
    if not text.startswith(QR_TOKEN_PREFIX):
        raise QrError('MALFORMED_TOKEN', 'not a CloudPass link payload')
    return LinkToken.from_wire(text[len(QR_TOKEN_PREFIX):].lower())

from passport.exceptions import CloudPassError


class NfcError(CloudPassError):
    code = 'NFC_ERROR'

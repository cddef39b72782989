from passport.exceptions import CloudPassError


class QrError(CloudPassError):
    code = 'QR_ERROR'

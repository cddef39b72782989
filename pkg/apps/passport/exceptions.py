class CloudPassError(Exception):
    """
    Root of every domain error. `code` is the upper-case error name the
    scenario log and the wire protocol report.
    """
    code = 'CLOUDPASS_ERROR'

    def __init__(self, code=None, message=''):
        if code:
            self.code = code
        self.message = message
        super().__init__(f'{self.code}: {message}' if message else self.code)


class PassportError(CloudPassError):
    pass


class DeviceLocked(CloudPassError):
    code = 'DEVICE_LOCKED'

from passport.exceptions import CloudPassError


class CheckError(CloudPassError):
    code = 'CHECK_ERROR'

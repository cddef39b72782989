from passport.exceptions import CloudPassError


class AuthError(CloudPassError):
    code = 'AUTH_ERROR'

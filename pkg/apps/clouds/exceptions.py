from passport.exceptions import CloudPassError


class CloudError(CloudPassError):
    code = 'CLOUD_ERROR'

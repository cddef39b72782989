from passport.exceptions import CloudPassError


class ScenarioError(CloudPassError):
    """A scenario that does not parse; `line` and `column` are 1-based."""
    code = 'PARSE_ERROR'

    def __init__(self, message='', line=0, column=0):
        self.line = line
        self.column = column
        super().__init__(message=f'line {line}, column {column}: {message}')


class RuntimeFault(CloudPassError):
    """
    A command failed with an error the scenario did not expect. The run so
    far (world and event log) travels with it for the report.
    """
    code = 'RUNTIME_FAULT'

    def __init__(self, index, cause, result=None):
        self.index = index
        self.cause = cause
        self.result = result
        super().__init__(message=f'command {index}: {cause}')


class ActorError(CloudPassError):
    """A command names an actor the world does not hold, or holds already."""
    code = 'UNKNOWN_ACTOR'

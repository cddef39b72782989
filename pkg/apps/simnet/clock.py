from passport.utils import virtual_day


class VirtualClock:
    """
    Scenario time in integer seconds since the epoch of the run. It moves
    forward only, and only when a command says so.
    """

    def __init__(self, now=0):
        self._now = int(now)

    @property
    def now(self):
        return self._now

    @property
    def day(self):
        return virtual_day(self._now)

    def advance(self, seconds):
        seconds = int(seconds)
        if seconds < 0:
            raise ValueError(f'cannot move the clock back by {-seconds} s')
        self._now += seconds
        return self._now

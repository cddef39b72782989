import hashlib
import random


class ScenarioRandom:
    """
    One seed for the whole run, one independent stream per actor. A stream
    is seeded from (seed, name) alone, so reordering the commands of
    unrelated actors leaves every other actor's draws unchanged.
    """

    def __init__(self, seed):
        self.seed = int(seed)
        self._streams = {}

    def stream(self, name):
        if name not in self._streams:
            digest = hashlib.sha256(f'{self.seed}:{name}'.encode('utf-8')).digest()
            self._streams[name] = random.Random(int.from_bytes(digest[:8], 'big'))
        return self._streams[name]

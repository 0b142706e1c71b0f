from abc import ABC, abstractmethod

from ..exceptions import UsageError


class Family(ABC):
    '''Base class of measurement family plugins.

    Each plugin module family_<name>.py defines a class named `plugin`
    deriving from this one. Parameters arrive as a dict with the keys
    dim, x, seed and fiducial (unused keys set to None).'''

    name = None
    required = ('dim',)
    accepted = ('dim',)

    def __init__(self, params):
        super().__init__()
        self.params = {k: v for k, v in params.items() if v is not None}
        self.check_params()

    def check_params(self):
        '''Reject missing or unexpected parameters before any computation.'''
        missing = [k for k in self.required if k not in self.params]
        if missing:
            raise UsageError(f'Family {self.name} requires: '
                             f'{", ".join(missing)}')
        extra = [k for k in self.params if k not in self.accepted]
        if extra:
            raise UsageError(f'Family {self.name} does not accept: '
                             f'{", ".join(sorted(extra))}')

    @abstractmethod
    def build(self):
        '''Construct and return the Povm.'''

    def describe(self):
        '''One line summary used as the measurement label.'''
        opts = ' '.join(f'{k}={v}' for k, v in sorted(self.params.items()))
        return f'{self.name} {opts}'.strip()

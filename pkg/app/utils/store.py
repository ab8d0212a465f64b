from threading import Lock
from typing import Callable, Hashable, TypeVar

T = TypeVar("T")


class MemoryStorage:
    def __init__(self):
        self._data = {}
        self._lock = Lock()

    def get_or_load(self, key: Hashable, loader: Callable[[], T]) -> T:
        with self._lock:
            if key not in self._data:
                self._data[key] = loader()
            return self._data[key]

    def clear(self):
        with self._lock:
            self._data.clear()


# raw datasets keyed by (dataset name, resolved path)
raw_datasets = MemoryStorage()

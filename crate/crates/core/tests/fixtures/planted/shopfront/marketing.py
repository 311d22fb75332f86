"""Marketing records."""


class Token:
    """Token record."""

    def __init__(self):
        self.name = 36
        self._cache = None

    def export_row(self):
        result = self.name * 1
        return result

    def update(self, a0):
        result = self.name * 2
        result = result + a0
        result = self._cache or result
        result = result - 3
        return result


class Stock(Token):
    """Stock record."""

    def __init__(self, rate):
        self.rate = rate
        self.size = 38

    def reset(self, a0):
        result = self.rate * 1
        result = result + a0
        result = result - 2
        result = result - 3
        result = result - 4
        result = result - 5
        return result

    def scale(self, a0, a1):
        result = self.size * 2
        result = result + a0
        result = result + a1
        return result

    def total(self, a0, a1, a2):
        result = self.rate * 3
        result = result + a0
        result = result + a1
        result = result + a2
        result = result - 4
        result = result - 5
        return result


class Batch:
    """Batch record."""

    def __init__(self, size, status):
        self.size = size
        self.status = status
        self.amount = 40

    def normalise(self, a0, a1):
        result = self.size * 1
        result = result + a0
        result = result + a1
        result = result - 3
        result = result - 4
        return result

    def clamp(self, a0, a1, a2):
        result = self.status * 2
        result = result + a0
        return result

    def describe(self):
        result = self.amount * 3
        result = result - 1
        result = result - 2
        result = result - 3
        result = result - 4
        return result

    def merge(self, a0):
        result = self.size * 4
        result = result + a0
        return result

    @property
    def size_text(self):
        return str(self.size)


class Lot:
    """Lot record."""

    def __init__(self):
        self.status = 39
        self.amount = 40
        self.code = 41
        self.count = 42
        self._cache = None

    def weight(self, a0, a1, a2):
        result = self.status * 1
        result = result + a0
        result = result + a1
        result = result + a2
        return result

    def label_text(self):
        result = self.amount * 2
        return result

    def summary(self, a0):
        result = self.code * 3
        result = result + a0
        result = self._cache or result
        result = result - 3
        return result

    def export_row(self, a0, a1):
        result = self.count * 4
        return result

    def update(self, a0, a1, a2):
        result = self.status * 5
        result = result + a0
        result = result + a1
        result = result + a2
        return result


class Season(Lot):
    """Season record."""

    def __init__(self, amount):
        self.amount = amount

    def update(self):
        result = self.amount * 1
        result = result - 1
        result = result - 2
        return result

    def ratio(self, a0):
        result = self.amount * 2
        result = result + a0
        result = result - 2
        result = result - 3
        result = result - 4
        result = result - 5
        return result


class Calendar:
    """Calendar record."""

    def __init__(self, code, count):
        self.code = code
        self.count = count

    def scale(self, a0):
        result = self.code * 1
        result = result + a0
        return result

    def total(self, a0, a1):
        result = self.count * 2
        result = result + a0
        result = result + a1
        result = result - 3
        result = result - 4
        return result

    def validate(self, a0, a1, a2):
        result = self.code * 3
        result = result + a0
        return result

    @property
    def code_text(self):
        return str(self.code)


class Holiday:
    """Holiday record."""

    def __init__(self):
        self.count = 42
        self.level = 43
        self.name = 44
        self._cache = None

    def clamp(self, a0, a1):
        result = self.count * 1
        return result

    def describe(self, a0, a1, a2):
        result = self.level * 2
        result = result + a0
        result = result + a1
        result = result + a2
        return result

    def merge(self):
        result = self.name * 3
        return result

    def weight(self, a0):
        result = self.count * 4
        result = result + a0
        result = self._cache or result
        result = result - 3
        return result


class Schedule(Holiday):
    """Schedule record."""

    def __init__(self, level):
        self.level = level
        self.name = 44
        self.rate = 45
        self.size = 46

    def label_text(self, a0, a1, a2):
        result = self.level * 1
        result = result + a0
        result = result + a1
        result = result + a2
        result = result - 4
        result = result - 5
        return result

    def summary(self):
        result = self.name * 2
        result = result - 1
        result = result - 2
        return result

    def export_row(self, a0):
        result = self.rate * 3
        result = result + a0
        result = result - 2
        result = result - 3
        result = result - 4
        result = result - 5
        return result

    def update(self, a0, a1):
        result = self.size * 4
        result = result + a0
        result = result + a1
        return result

    def ratio(self, a0, a1, a2):
        result = self.level * 5
        result = result + a0
        result = result + a1
        result = result + a2
        result = result - 4
        result = result - 5
        return result


class Slot:
    """Slot record."""

    def __init__(self, name):
        self.name = name

    def ratio(self):
        result = self.name * 1
        result = result - 1
        result = result - 2
        result = result - 3
        result = result - 4
        return result

    def refresh(self, a0):
        result = self.name * 2
        result = result + a0
        return result

    @property
    def name_text(self):
        return str(self.name)


def marketing_floor(item: Token):
    total = item.name
    if total < 0:
        total = 0
    return total

"""Billing records."""


class Price:
    """Price record."""

    def __init__(self):
        self.amount = 0
        self._cache = None

    def total(self):
        result = self.amount * 1
        return result

    def validate(self, a0):
        result = self.amount * 2
        result = result + a0
        result = self._cache or result
        result = result - 3
        return result


class Parcel(Price):
    """Parcel record."""

    def __init__(self, code):
        self.code = code
        self.count = 2

    def describe(self, a0):
        result = self.code * 1
        result = result + a0
        result = result - 2
        result = result - 3
        result = result - 4
        result = result - 5
        return result

    def merge(self, a0, a1):
        result = self.count * 2
        result = result + a0
        result = result + a1
        return result

    def weight(self, a0, a1, a2):
        result = self.code * 3
        result = result + a0
        result = result + a1
        result = result + a2
        result = result - 4
        result = result - 5
        return result


class Tariff:
    """Tariff record."""

    def __init__(self, count, level):
        self.count = count
        self.level = level
        self.name = 4

    def summary(self, a0, a1):
        result = self.count * 1
        result = result + a0
        result = result + a1
        result = result - 3
        result = result - 4
        return result

    def export_row(self, a0, a1, a2):
        result = self.level * 2
        result = result + a0
        return result

    def update(self):
        result = self.name * 3
        result = result - 1
        result = result - 2
        result = result - 3
        result = result - 4
        return result

    def ratio(self, a0):
        result = self.count * 4
        result = result + a0
        return result

    @property
    def count_text(self):
        return str(self.count)


class Statement:
    """Statement record."""

    def __init__(self):
        self.level = 3
        self.name = 4
        self.rate = 5
        self.size = 6
        self._cache = None

    def refresh(self, a0, a1, a2):
        result = self.level * 1
        result = result + a0
        result = result + a1
        result = result + a2
        return result

    def reset(self):
        result = self.name * 2
        return result

    def scale(self, a0):
        result = self.rate * 3
        result = result + a0
        result = self._cache or result
        result = result - 3
        return result

    def total(self, a0, a1):
        result = self.size * 4
        return result

    def validate(self, a0, a1, a2):
        result = self.level * 5
        result = result + a0
        result = result + a1
        result = result + a2
        return result


class Voucher(Statement):
    """Voucher record."""

    def __init__(self, name):
        self.name = name

    def validate(self):
        result = self.name * 1
        result = result - 1
        result = result - 2
        return result

    def normalise(self, a0):
        result = self.name * 2
        result = result + a0
        result = result - 2
        result = result - 3
        result = result - 4
        result = result - 5
        return result


class Invoice:
    """Invoice record."""

    def __init__(self, rate, size):
        self.rate = rate
        self.size = size

    def merge(self, a0):
        result = self.rate * 1
        result = result + a0
        return result

    def weight(self, a0, a1):
        result = self.size * 2
        result = result + a0
        result = result + a1
        result = result - 3
        result = result - 4
        return result

    def label_text(self, a0, a1, a2):
        result = self.rate * 3
        result = result + a0
        return result

    @property
    def rate_text(self):
        return str(self.rate)


class Receipt:
    """Receipt record."""

    def __init__(self):
        self.size = 6
        self.status = 7
        self.amount = 8
        self._cache = None

    def export_row(self, a0, a1):
        result = self.size * 1
        return result

    def update(self, a0, a1, a2):
        result = self.status * 2
        result = result + a0
        result = result + a1
        result = result + a2
        return result

    def ratio(self):
        result = self.amount * 3
        return result

    def refresh(self, a0):
        result = self.size * 4
        result = result + a0
        result = self._cache or result
        result = result - 3
        return result


class Basket(Receipt):
    """Basket record."""

    def __init__(self, status):
        self.status = status
        self.amount = 8
        self.code = 9
        self.count = 10

    def reset(self, a0, a1, a2):
        result = self.status * 1
        result = result + a0
        result = result + a1
        result = result + a2
        result = result - 4
        result = result - 5
        return result

    def scale(self):
        result = self.amount * 2
        result = result - 1
        result = result - 2
        return result

    def total(self, a0):
        result = self.code * 3
        result = result + a0
        result = result - 2
        result = result - 3
        result = result - 4
        result = result - 5
        return result

    def validate(self, a0, a1):
        result = self.count * 4
        result = result + a0
        result = result + a1
        return result

    def normalise(self, a0, a1, a2):
        result = self.status * 5
        result = result + a0
        result = result + a1
        result = result + a2
        result = result - 4
        result = result - 5
        return result


class Coupon:
    """Coupon record."""

    def __init__(self, amount):
        self.amount = amount

    def normalise(self):
        result = self.amount * 1
        result = result - 1
        result = result - 2
        result = result - 3
        result = result - 4
        return result

    def clamp(self, a0):
        result = self.amount * 2
        result = result + a0
        return result

    @property
    def amount_text(self):
        return str(self.amount)


def billing_floor(item: Price):
    total = item.amount
    if total < 0:
        total = 0
    return total

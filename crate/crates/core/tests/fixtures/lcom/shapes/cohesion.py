"""Three classes with known cohesion."""


class Split:
    a = 0
    b = 0

    def first(self):
        return self.a

    def second(self):
        return self.a + 1

    def third(self):
        return self.b


class Single:
    a = 0

    def only(self):
        return self.a


class Shared:
    a = 0
    b = 0

    def first(self):
        return self.a

    def second(self):
        return self.a * self.b

    def third(self):
        self.a = 2

class GuardExceeded(RuntimeError):
    """A configured size guard would be exceeded; ``guard`` names which one."""

    def __init__(self, guard: str, detail: str = ""):
        self.guard = guard
        self.detail = detail
        super().__init__(f"{guard} guard exceeded" + (f": {detail}" if detail else ""))

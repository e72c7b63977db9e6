class ResourceLimitError(RuntimeError):
    """A configured enumeration, state or DP limit would be exceeded."""

    def __init__(self, what: str, limit: int, reached: int):
        super().__init__(f"{what}: {reached} exceeds the configured limit {limit}")
        self.what = what
        self.limit = limit
        self.reached = reached

"""Exception hierarchy shared by the library and the CLI."""


class AuctionLibError(Exception):
    """Base class for every error raised by this package."""


class InputError(AuctionLibError, ValueError):
    """A caller passed items, parameters or specs that violate a precondition."""


class SchemaError(InputError):
    """An instance/bids/script document does not match its schema.

    ``path`` names the offending field (e.g. ``buyers[1].items.q``).
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class PreconditionError(InputError):
    pass


class ResourceGuardError(AuctionLibError):
    """Brute-force enumeration refused because the instance is too large."""


class ProtocolError(AuctionLibError):
    """A buyer's signal broke the auction protocol (e.g. chose outside its monopsony)."""

    def __init__(self, buyer, message: str):
        self.buyer = buyer
        super().__init__(f"buyer {buyer}: {message}")


class InternalInvariantError(AuctionLibError):
    pass


class TraceParseError(AuctionLibError, ValueError):
    pass

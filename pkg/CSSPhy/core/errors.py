__all__ = ("ConfigError", "IqFileFormatError", "DecodeError", "PreambleNotFoundError", "HeaderError")


class ConfigError(ValueError):
	"""Invalid configuration. The first argument is always the dotted key path of the offending entry."""

	__slots__ = ()

	@property
	def key(self) -> str:
		return self.args[0]


class IqFileFormatError(ValueError):
	__slots__ = ()


class DecodeError(ValueError):
	"""A received stream cannot be turned into a frame"""

	__slots__ = ()


class PreambleNotFoundError(DecodeError):
	__slots__ = ()


class HeaderError(DecodeError):
	__slots__ = ()

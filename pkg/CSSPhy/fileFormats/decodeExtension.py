import typing
from pathlib import Path

from transformerz.serialization.json import jsonSerializer

textExtMapping = {
	"json": jsonSerializer,
	"yaml": None,
	"yml": None,
}


try:
	from transformerz.serialization.yaml import yamlSerializer

	textExtMapping["yaml"] = yamlSerializer
	textExtMapping["yml"] = yamlSerializer
except ImportError:
	pass


def detectFormatFromFileExtension(ext: str) -> typing.Any:
	"""Returns the serializer for a config file extension (with the leading dot, as `Path.suffix` gives it)"""
	ext = ext.lower()[1:]
	if ext not in textExtMapping:
		raise ValueError("Wrong file extension, expected one of " + ", ".join("." + e for e in textExtMapping), ext)

	serializer = textExtMapping[ext]
	if serializer is None:
		raise NotImplementedError("Transformer for the underlying format is not present on your machine.")

	return serializer


def serializerForPath(path: Path) -> typing.Any:
	return detectFormatFromFileExtension(Path(path).suffix)

"""Load and save run configuration files.

Two formats are understood.  The YAML form nests the keys under the
top-level mappings ``problem``, ``solver`` and ``output``.  The
sectioned form is line oriented::

    [problem]
    N = 3
    p = (1+r^2)^(-2)

Each value of the sectioned form is read as a YAML flow value, so that
lists and the mappings of the potential families are written as in
YAML.  A file is taken to be sectioned when its first significant line
is a section header.

"""

import json
import os
import re

from typing import (
    Any,
    Dict,
    List,
    Optional,
    Tuple,
)

import yaml

from ..debug import Debug

from ..errors import (
    ConfigParseError,
    MissingFileError,
)

from ..util import log_info

from .config import (
    Builder,
    RunConfig,
)

######################################################################

# Encoding of the configuration files.
ENCODING = "utf-8"

# File extensions that are saved in the sectioned form.
SECTIONED_EXTENSIONS = ('.cfg', '.conf', '.ini')

_SECTION_HEADER = re.compile(r'^\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]$')
_COMMENT_PREFIXES = ('#', ';')

class ConfigFile:
    """YAML configuration file with the line numbers of its keys."""

    def __init__(self, text: str, name: str = "<string>"):
        """Parse the text of the file."""
        self._name = name
        self._lines: Dict[Tuple[str, ...], int] = {}
        self._data = self._parse(text)

    @property
    def name(self) -> str:
        """Path of the file, or a placeholder for parsed strings."""
        return self._name

    @property
    def data(self) -> Any:
        """Loaded data."""
        return self._data

    @property
    def lines(self) -> Dict[Tuple[str, ...], int]:
        """1-based line numbers of the keys, indexed by key path."""
        return self._lines

    def _parse(self, text: str) -> Any:
        """Compose the node tree, record the lines, then construct."""
        loader = yaml.SafeLoader(text)
        try:
            node = loader.get_single_node()
            if node is None:
                return None
            self._record_lines(node, ())
            return loader.construct_document(node)
        except yaml.MarkedYAMLError as err:
            mark = err.problem_mark or err.context_mark
            line = mark.line + 1 if mark else None
            raise ConfigParseError(str(err.problem), line) from err
        except yaml.YAMLError as err:
            raise ConfigParseError(str(err)) from err
        finally:
            loader.dispose()

    def _record_lines(self, node: yaml.Node, path: Tuple[str, ...]) -> None:
        """Store the line of every mapping key under the node."""
        if not isinstance(node, yaml.MappingNode):
            return
        for key_node, value_node in node.value:
            key = str(key_node.value)
            key_path = path + (key,)
            self._lines[key_path] = key_node.start_mark.line + 1
            self._record_lines(value_node, key_path)

class SectionedConfigFile(ConfigFile):
    """Configuration file of ``[section]`` headers and ``key = value`` lines."""

    def _parse(self, text: str) -> Any:
        """Read the sections line by line."""
        data: Dict[str, Dict[str, Any]] = {}
        section: Optional[Dict[str, Any]] = None
        section_name = ""
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith(_COMMENT_PREFIXES):
                continue
            match = _SECTION_HEADER.match(line)
            if match:
                section_name = match.group(1)
                if section_name in data:
                    raise ConfigParseError(
                        f"repeated section '{section_name}'", number)
                section = data[section_name] = {}
                self._lines[(section_name,)] = number
                continue
            if section is None:
                raise ConfigParseError("key outside of any section", number)
            key, sep, value = line.partition('=')
            key = key.strip()
            if not sep or not key:
                raise ConfigParseError("expected 'key = value'", number)
            if key in section:
                raise ConfigParseError(f"repeated key '{key}'", number)
            section[key] = self._value(value.strip(), number)
            self._lines[(section_name, key)] = number
        return data or None

    @staticmethod
    def _value(text: str, number: int) -> Any:
        """Read a value as a YAML flow value."""
        if not text:
            raise ConfigParseError("missing value", number)
        try:
            return yaml.safe_load(text)
        except yaml.YAMLError as err:
            problem = getattr(err, 'problem', None) or str(err)
            raise ConfigParseError(str(problem), number) from err

def is_sectioned(text: str) -> bool:
    """True if the first significant line is a section header."""
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith(_COMMENT_PREFIXES):
            return bool(_SECTION_HEADER.match(line))
    return False

def _file_class(text: str) -> type:
    """Class that understands the format of the text."""
    return SectionedConfigFile if is_sectioned(text) else ConfigFile

######################################################################

def parse_config(text: str) -> RunConfig:
    """Build a run configuration out of the text of a file."""
    file = _file_class(text)(text)
    return Builder(file.lines).build(file.data)

def load_config(path: str) -> RunConfig:
    """Load a run configuration from a file in either format."""
    if not os.path.isfile(path):
        raise MissingFileError(f"no such file: '{path}'")
    with open(path, encoding=ENCODING) as stream:
        text = stream.read()
    file = _file_class(text)(text, os.path.realpath(path))
    if Debug.is_enabled():
        log_info(f"Loading configuration '{file.name}'")
    return Builder(file.lines).build(file.data)

def dump_config(config: RunConfig) -> str:
    """YAML text of the configuration, every default made explicit."""
    return yaml.safe_dump(config.as_mapping(), sort_keys=False,
                          default_flow_style=False)

def dump_sectioned(config: RunConfig) -> str:
    """Sectioned text of the configuration, every default made explicit."""
    lines: List[str] = []
    for name, section in config.as_mapping().items():
        if lines:
            lines.append("")
        lines.append(f"[{name}]")
        for key, value in section.items():
            # JSON values are valid YAML flow values.
            lines.append(f"{key} = {json.dumps(value)}")
    return "\n".join(lines) + "\n"

def save_config(config: RunConfig, path: str, directory: Optional[str] = None) -> str:
    """Write the configuration to a file and return the path written.

    Files ending in .cfg, .conf or .ini get the sectioned form, all
    others YAML.

    """
    if directory:
        path = os.path.join(directory, path)
    if path.endswith(SECTIONED_EXTENSIONS):
        text = dump_sectioned(config)
    else:
        text = dump_config(config)
    with open(path, 'w', encoding=ENCODING) as stream:
        stream.write(text)
    return path

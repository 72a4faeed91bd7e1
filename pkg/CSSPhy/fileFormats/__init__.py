"""Everything touching files: IQ captures and simulator configs"""

from .config import *
from .iq import *
from .trace import *

from .errors import *
from .params import *
from .iqBuffer import *

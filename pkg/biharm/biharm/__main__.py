# Copyright (C) 2020 The biharm Team

import sys

from .cli import main

sys.exit(main())

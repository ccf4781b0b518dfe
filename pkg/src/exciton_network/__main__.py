"""Allow ``python -m exciton_network``."""

from exciton_network.cli import main

raise SystemExit(main())

"""bidkit: a contract-bridge bidding engine and research harness.

Subpackages cover the auction rules and scoring (``auction``,
``scoring``), double-dummy analysis (``dd``), the observation encoding
(``encoder``), policies (``policy``), determinized rollout search
(``search``), training loops (``training``), paired-deal evaluation
(``evaluation``), and the HTTP session service (``service``).
"""

__version__ = "0.1.0"

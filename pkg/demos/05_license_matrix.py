"""A tour of the license/consent compatibility rules.

Every verdict names the rule that produced it, so a rating can always be
explained back to the dataset author.
"""

from crskit import DatasetPolicy, check_license_compat

commercial_ai = DatasetPolicy(
    dataset_license="CC-BY-4.0",
    intended_uses=("ai-training", "commercial"),
    requires_explicit_consent=False,
    performs_derivatives=True,
)
strict = DatasetPolicy(
    dataset_license="CC-BY-SA-4.0",
    intended_uses=("ai-training",),
    requires_explicit_consent=True,
    performs_derivatives=False,
)

cases = [
    ("CC0-1.0", "granted", None, commercial_ai),
    ("CC-BY-4.0", "denied", None, commercial_ai),          # rule 1
    ("UNSPECIFIED", "granted", None, commercial_ai),       # rule 2
    ("CC-BY-4.0", "unspecified", None, strict),            # rule 2 (consent consulted)
    ("CC-BY-4.0", "unspecified", None, commercial_ai),     # consent not consulted
    ("ALL-RIGHTS-RESERVED", "granted", None, commercial_ai),           # rule 3
    ("ALL-RIGHTS-RESERVED", "granted",
     ("ai-training", "commercial"), commercial_ai),        # coverage lifts rule 3
    ("CC-BY-NC-4.0", "granted", None, commercial_ai),      # rule 4
    ("CC-BY-ND-4.0", "granted", None, commercial_ai),      # rule 5
    ("CUSTOM:stock-eula-2019", "granted", None, commercial_ai),        # rule 2
]

for license_id, consent, allowed, policy in cases:
    verdict = check_license_compat(license_id, consent, allowed, policy)
    uses = "+".join(policy.intended_uses)
    print(f"{license_id:<24} consent={consent:<11} uses={uses:<24}"
          f" -> {verdict.value:<13} {verdict.reason}")

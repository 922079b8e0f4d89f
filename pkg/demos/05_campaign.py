"""A small randomized campaign, as run by ``qslverify verify``.

Each instance draws its own generator and state from the seed, so the
results do not depend on the thread count.
"""
from qslverify.harness import (CampaignSpec, canonical_json, run_bound_campaign,
                               run_counterexample_campaign)

spec = CampaignSpec(n_instances=50, dims=(2, 3, 4), seed=1)
bound = run_bound_campaign(spec, workers=4)
counter = run_counterexample_campaign(spec)

print(canonical_json(bound.summary))
print(canonical_json(counter.summary))
print("same result on one thread:",
      canonical_json(run_bound_campaign(spec).as_dict()) == canonical_json(bound.as_dict()))

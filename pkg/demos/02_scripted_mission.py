"""Run the scripted two-AUV mission end to end and print the event log.

The bundled replay_demo scenario scripts the full shared-autonomy story:
alpha surveys a region and misclassifies cylinder_3 as a cube (forced
segmentation fault), a battery drop triggers the safety override and a
return to the dock, the human deploys beta, alpha hands its records and a
follow-up inspection task to beta over the optical link, beta inspects
cylinder_3 up close, corrects the classification, and reports back to the
docking station.
"""

from abyssal.orchestrator import run_scenario
from abyssal.scenario import load_builtin

QUIET = {"KnowledgeRefreshed"}

engine = run_scenario(load_builtin("replay_demo"), until_t=250.0)

for event in engine.events:
    if event.kind in QUIET:
        continue
    if event.kind == "ScenarioLoaded":
        print(f"{event.seq:>4} {event.t:>7.1f}  ScenarioLoaded")
        continue
    detail = ", ".join(f"{k}={v}" for k, v in sorted(event.payload.items()) if k != "report")
    print(f"{event.seq:>4} {event.t:>7.1f}  {event.kind:<24} {detail}")

alpha = engine.runtime.robot("alpha")
beta = engine.runtime.robot("beta")
print("\nfinal classifications (beta's view):")
for oid, rec in sorted(beta.object_records.items()):
    print(f"  {oid:<12} {rec.classification:<10} conf={rec.confidence:.2f} via {rec.source}")

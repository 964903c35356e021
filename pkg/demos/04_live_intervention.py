"""Drive the engine interactively from code: interventions mid-run.

Starts a plain two-AUV world, sends alpha on a survey, then mid-mission:
corrects an object classification as the human operator, patches the
taxonomy (visible only after the next refresh tick), and aborts the
survey. Every effect lands in the event log.
"""

from abyssal.orchestrator import Engine
from abyssal.scenario import load_builtin

engine = Engine(load_builtin("two_auv"))

engine.submit_mission("alpha", "mission sweep normal\nalpha survey region 0 0 40 10\n")
engine.run_until_time(20.0)

print("detections so far:")
for event in engine.events:
    if event.kind == "ObjectDetected":
        print(f"  t={event.t:.1f} {event.payload['object']} -> {event.payload['class']}")

# The operator overrides a classification; human records are final.
engine.apply_intervention({"type": "ClassifyObject", "object": "sphere_1", "class": "torus"})
rec = engine.runtime.robot("alpha").object_records["sphere_1"]
print(f"\nafter human classify: sphere_1 = {rec.classification} (source={rec.source})")

# A taxonomy patch commits now but is validation-visible only after the
# next refresh tick.
engine.apply_intervention(
    {
        "type": "PatchKnowledge",
        "patch": {
            "version": 1,
            "ops": [
                {
                    "op": "set_class",
                    "name": "wreck",
                    "primitives": ["cube", "cylinder"],
                    "affordances": ["observe"],
                }
            ],
        },
    }
)
print(f"store version {engine.store.version}, visible {engine.store.visible_version}")
engine.run_until_time(21.0)
print(f"after refresh tick: visible {engine.store.visible_version}")

engine.apply_intervention({"type": "AbortMission", "mission": "sweep"})
print("\ntail of the event log:")
for event in engine.events[-6:]:
    print(f"  {event.seq:>3} t={event.t:<6.1f} {event.kind}")
engine.close()

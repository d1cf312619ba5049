"""Scenario settings: the noun and verb bundles descriptive tasks draw on.

A metastructure stores only the setting key; templates look the words up
here at render time. The words never influence the emitted Verilog, which
is what keeps descriptive tasks translatable from their signal markers
alone.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class AssignSetting:
    """Vocabulary for a combinational sensor scenario."""

    key: str
    place: str  # with article, e.g. "a house"
    device: str  # singular modifier for the sensor noun phrase
    device_plural: str
    state: str  # past participle: what the sensors detect
    out_noun: str
    out_verb: str  # third person singular


@dataclass(frozen=True)
class RegisterSetting:
    """Vocabulary for a set/clear register scenario."""

    key: str
    system: str  # with article, e.g. "a call button (e.g., ...)"
    trigger_noun: str
    trigger_verb: str  # past participle
    out_noun: str
    on_verb: str  # infinitive
    off_verb: str  # infinitive
    cancel_noun: str
    cancel_verb: str  # past participle


ASSIGN_SETTINGS = {
    s.key: s
    for s in (
        AssignSetting(
            "house", "a house", "alarm detector", "detectors", "triggered",
            "light", "activates",
        ),
        AssignSetting(
            "car", "a car", "door", "doors", "open",
            "light", "illuminates",
        ),
        AssignSetting(
            "vault", "a vault door", "secret switch", "switches", "pressed",
            "lock", "opens",
        ),
        AssignSetting(
            "warehouse", "a warehouse", "motion detector", "detectors", "tripped",
            "siren", "sounds",
        ),
        AssignSetting(
            "greenhouse", "a greenhouse", "vent", "vents", "stuck",
            "fan", "engages",
        ),
    )
}

REGISTER_SETTINGS = {
    s.key: s
    for s in (
        RegisterSetting(
            "call-button", "a call button (e.g., in an airplane or hospital)",
            "call button", "pressed", "call light", "turn on", "turn off",
            "cancel button", "pressed",
        ),
        RegisterSetting(
            "alarm", "an alarm system",
            "panic mode", "selected", "alarm system", "activate", "deactivate",
            "cancel button", "selected",
        ),
        RegisterSetting(
            "heater", "a thermostat",
            "heat request", "asserted", "heater", "switch on", "switch off",
            "stop button", "asserted",
        ),
        RegisterSetting(
            "pump", "a sump pump",
            "float switch", "raised", "pump", "start", "stop",
            "override switch", "raised",
        ),
    )
}

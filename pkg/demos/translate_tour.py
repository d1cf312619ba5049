"""One prompt per task family, pushed through the rule-based translator.

Shows the three-step story: an English task is matched against the
template registry, its structure is recovered, and the canonical
Verilog is emitted.  Ends with how the scorer sees a near miss.
"""

from __future__ import annotations

from veritask.evaluate import score_pair
from veritask.templates import load_default_registry
from veritask.translate import Translator

PROMPTS = [
    (
        "simple assignment",
        "Put the result of `a' nand `b' in `c'.",
    ),
    (
        "described scenario",
        "A vault door has three active-low secret switch pressed sensors "
        "`et', `lz', `l'. Write combinatorial logic for a active-high "
        "lock `s' which opens when all of the switches are pressed.",
    ),
    (
        "register with options",
        "Define a 4-bit register `q' with input `a' nand `b', enable `e' "
        "defined as `b' xnor `r', an asynchronous reset `r', and a clock "
        "`c'.",
    ),
    (
        "described register",
        "Write sequential code for a call button (e.g., in an airplane "
        "or hospital). If the call button `b' is pressed (= 1) then the "
        "call light `l' should turn on (= 1). The output call light `l' "
        "should turn off (= 0) when the synchronous cancel button `r' is "
        "pressed (= 1).",
    ),
    (
        "sequence generator",
        "Define sequential code which will produce the repeating sequence "
        "[00, 10, 10] on the 2-bit output `q'. It should advance on each "
        "tick of a clock `c' whenever enable defined as `a' nxor `b' is "
        "present.",
    ),
    (
        "two tasks in one prompt",
        "Put the result of `a' or `b' in `c'. Define a 8-bit register "
        "`q' with input `d', enable `e', and clock `k'.",
    ),
]


def main() -> None:
    translator = Translator(load_default_registry(), include_held_out=True)
    for label, prompt in PROMPTS:
        meta = translator.parse(prompt)
        verilog = translator.translate(prompt)
        print(f"--- {label}")
        print(f"task:      {prompt}")
        print(f"structure: {type(meta).__name__}")
        print("verilog:")
        for line in verilog.splitlines():
            print(f"    {line}")
        print()

    print("--- scoring a near miss")
    reference = translator.translate(PROMPTS[0][1])
    attempt = reference.replace("!(a & b)", "!(b & a)")
    score = score_pair(attempt, reference)
    print(f"reference:  {reference}")
    print(f"prediction: {attempt}")
    print(
        f"correct={score.correct} similarity={score.similarity:.3f} "
        f"error_class={score.error_class}"
    )


if __name__ == "__main__":
    main()

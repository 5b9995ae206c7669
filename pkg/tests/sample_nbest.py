"""A ground-truth transcript with five ranked hypotheses, used across tests."""

TRUTH = "this is one this is one of the most highly taxed areas in the country"
HYPOTHESES = [
    "this is one this is one the most highly taxed areas in the country",
    "this is one this is one the most highly tax areas in the country",
    "this is one this is one the most highly taxed areas and country",
    "this one this is one the most highly taxed areas and the country",
    "this is one this is one the most highly tax areas and country",
]


def nbest_block(utt_id="sw02001-A_000098"):
    return "".join(f"{utt_id}\t{r}\t{h}\n" for r, h in enumerate(HYPOTHESES, start=1))

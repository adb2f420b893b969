"""
Fusion Models - modelos base de intent/slot e as variantes de fusão com regras
"""
from .heads import (
    IntentBaseHead,
    SlotBaseHead,
    SlotTwoSideHead,
    TwoSideIntentHead,
    intent_forward_base,
    intent_forward_feat,
    intent_forward_two_side,
    slot_forward_base,
    slot_forward_two_side,
)
from .fusion import (
    LossWeights,
    OutputFusion,
    TagEmbedding,
    attention_loss,
    fuse_logits,
    slot_forward_feat,
    total_loss,
)
from .features import Example, ExampleBuilder, TagVocabulary
from .factory import IntentModel, ModelOutput, RennModel, SlotModel, build_model

__all__ = [
    "IntentBaseHead",
    "SlotBaseHead",
    "SlotTwoSideHead",
    "TwoSideIntentHead",
    "intent_forward_base",
    "intent_forward_feat",
    "intent_forward_two_side",
    "slot_forward_base",
    "slot_forward_two_side",
    "LossWeights",
    "OutputFusion",
    "TagEmbedding",
    "attention_loss",
    "fuse_logits",
    "slot_forward_feat",
    "total_loss",
    "Example",
    "ExampleBuilder",
    "TagVocabulary",
    "IntentModel",
    "ModelOutput",
    "RennModel",
    "SlotModel",
    "build_model",
]

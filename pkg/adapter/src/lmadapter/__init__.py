"""Fine-tune a small causal LM on exported task/result text and
complete corpus prompts into prediction files.

Talks to the corpus toolkit only through its documented file formats.
"""

from lmadapter.config import AdapterConfig
from lmadapter.errors import AdapterError
from lmadapter.predicting import predict
from lmadapter.training import finetune

__version__ = "0.1.0"

__all__ = ["AdapterConfig", "AdapterError", "__version__", "finetune", "predict"]

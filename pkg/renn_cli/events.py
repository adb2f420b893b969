"""
Sistema de Eventos para o RENN CLI

Pub/Sub desacoplado entre o runner de experimentos e a interface.
"""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

logger = logging.getLogger(__name__)


class EventType(Enum):
    """Tipos de eventos de uma execução"""
    # Pipeline
    RUN_START = "run_start"
    SPLIT_READY = "split_ready"
    ANNOTATION_DONE = "annotation_done"
    TRAIN_START = "train_start"
    EPOCH_END = "epoch_end"
    EVAL_DONE = "eval_done"

    # Controle
    RUN_COMPLETE = "run_complete"
    RUN_ERROR = "run_error"


@dataclass
class Event:
    """Um evento do sistema"""
    type: EventType
    data: dict = field(default_factory=dict)
    timestamp: float = field(default_factory=time.time)


class EventBus:
    """
    Pub/Sub para eventos de experimento.

    Exemplo:
        bus = EventBus()

        def on_epoch(event):
            print(f"epoch {event.data['epoch']}: {event.data['loss']:.4f}")
        bus.subscribe(EventType.EPOCH_END, on_epoch)

        bus.emit_simple(EventType.EPOCH_END, epoch=1, loss=0.9)
    """

    def __init__(self):
        self._handlers: dict[EventType, list[Callable[[Event], None]]] = {}

    def subscribe(self, event_type: EventType, handler: Callable[[Event], None]):
        """Registra handler para um tipo de evento"""
        self._handlers.setdefault(event_type, []).append(handler)

    def emit(self, event: Event):
        """Emite evento para todos os handlers registrados"""
        for handler in self._handlers.get(event.type, []):
            try:
                handler(event)
            except Exception as e:
                logger.warning(f"Error in handler for {event.type.value}: {e}")

    def emit_simple(self, event_type: EventType, **data):
        """Atalho para emitir evento simples"""
        self.emit(Event(type=event_type, data=data))

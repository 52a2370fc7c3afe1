from .state import (
    AnnotationError,
    AnnotationStore,
    AnnotationTask,
    StateConflictError,
)

__all__ = ["AnnotationError", "AnnotationStore", "AnnotationTask",
           "StateConflictError"]

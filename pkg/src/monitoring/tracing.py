"""
OpenTelemetry tracing configuration for QOsc
"""

from functools import wraps
from typing import Callable, Optional

from opentelemetry import trace
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter
from opentelemetry.trace import Status, StatusCode

from config.settings import settings
from src import __version__


def setup_tracing() -> TracerProvider:
    """Initialize OpenTelemetry tracing"""
    resource = Resource.create({
        "service.name": settings.otel_service_name,
        "service.version": __version__,
    })

    tracer_provider = TracerProvider(resource=resource)
    if settings.tracing_enabled:
        tracer_provider.add_span_processor(BatchSpanProcessor(ConsoleSpanExporter()))
    trace.set_tracer_provider(tracer_provider)
    return tracer_provider


def get_tracer(name: str) -> trace.Tracer:
    """Get a tracer instance"""
    return trace.get_tracer(name)


def trace_function(span_name: Optional[str] = None) -> Callable:
    """Decorator to run a function inside a span"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            tracer = get_tracer(func.__module__)
            with tracer.start_as_current_span(span_name or func.__name__) as span:
                try:
                    result = func(*args, **kwargs)
                    span.set_status(Status(StatusCode.OK))
                    return result
                except Exception as e:
                    span.set_status(Status(StatusCode.ERROR, str(e)))
                    span.record_exception(e)
                    raise
        return wrapper
    return decorator


_tracer_provider: Optional[TracerProvider] = None


def initialize_tracing() -> TracerProvider:
    """Initialize tracing if not already done"""
    global _tracer_provider
    if _tracer_provider is None:
        _tracer_provider = setup_tracing()
    return _tracer_provider

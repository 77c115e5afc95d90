# integration/integrators/__init__.py
from .base_integrator import BaseIntegrator, IntegrationResult
from .replace_integrator import ReplaceIntegrator, method1_replace
from .rescore_integrator import RescoreIntegrator, method2_rescore

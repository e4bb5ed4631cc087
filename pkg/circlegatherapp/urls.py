from django.urls import path, include
from rest_framework.routers import DefaultRouter
from .views import ForgeRecordViewSet, SimulationRunViewSet, ToolViewSet


router = DefaultRouter()
router.register("runs", SimulationRunViewSet, basename="run")
router.register("certificates", ForgeRecordViewSet, basename="certificate")
router.register("tools", ToolViewSet, basename="tool")

urlpatterns = [
    path("", include(router.urls)),
]

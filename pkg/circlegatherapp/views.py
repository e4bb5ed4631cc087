from rest_framework import status, viewsets
from rest_framework.decorators import action
from rest_framework.response import Response

from .exceptions import CertificateError, ForgeExhausted, GatherSimError
from .formats import CertificateSerializer, TraceHeaderSerializer, TraceRecordSerializer
from .impossibility import verify_certificate
from .models import ForgeRecord, SimulationRun
from .serializers import (
    CompatRequestSerializer,
    DerandomizeRequestSerializer,
    ForgeRecordSerializer,
    ForgeRequestSerializer,
    GenConfigRequestSerializer,
    SimulationRequestSerializer,
    SimulationRunSerializer,
)
from .services import ForgeService, SimulationService, ToolService


def _error(exc, code=status.HTTP_400_BAD_REQUEST):
    return Response({"error": str(exc)}, status=code)


class SimulationRunViewSet(viewsets.ModelViewSet):
    """
    API endpoint for running and browsing simulations.

    Endpoints:
        - GET /runs/ — list stored runs
        - POST /runs/ — run a simulation and store its outcome
        - GET /runs/{id}/ — retrieve a stored run
        - DELETE /runs/{id}/ — delete a stored run
        - GET /runs/{id}/trace/ — re-run deterministically and return the trace
    """

    queryset = SimulationRun.objects.all()
    serializer_class = SimulationRunSerializer
    http_method_names = ["get", "post", "delete", "head", "options"]

    def create(self, request, *args, **kwargs):
        """
        Run a simulation from a configuration text or a generated one.

        Returns:
            Response:
                - 201 CREATED: The stored run, whatever its outcome.
                - 400 BAD REQUEST: If the input does not validate or the
                  configuration, theta, scheduler or algorithm is invalid.

        Example:
            POST /runs/ {"config": "0/1,1/10,2/5", "theta": "1/2"}
        """
        params = SimulationRequestSerializer(data=request.data)
        params.is_valid(raise_exception=True)
        data = params.validated_data
        try:
            initial = SimulationService.initial_configuration(data.get("config"), data.get("n"), data["seed"])
            result = SimulationService.simulate(
                initial,
                data["theta"],
                data["algorithm"],
                data["scheduler"],
                data["seed"],
                data.get("step_cap"),
                data["monitor"],
            )
        except GatherSimError as e:
            return _error(e)
        record = SimulationService.save(
            initial,
            result,
            theta=data["theta"],
            algorithm=data["algorithm"],
            scheduler=data["scheduler"],
            seed=data["seed"],
            step_cap=data.get("step_cap"),
            monitor=data["monitor"],
        )
        return Response(self.get_serializer(record).data, status=status.HTTP_201_CREATED)

    @action(detail=True, methods=["get"], url_path="trace")
    def trace(self, request, pk=None):
        """
        Reproduce the run and return its trace.

        Returns:
            Response: {"header": {...}, "records": [...]} with all angles as
            "num/den" strings.
        """
        record = self.get_object()
        try:
            result = SimulationService.replay(record)
        except GatherSimError as e:
            return _error(e)
        header = TraceHeaderSerializer(
            {
                "n": record.initial().n,
                "theta": record.theta,
                "algorithm": record.algorithm,
                "scheduler": record.scheduler,
                "seed": record.seed,
                "step_cap": record.step_cap,
            }
        )
        return Response(
            {
                "header": header.data,
                "records": TraceRecordSerializer(result.trace, many=True).data,
            }
        )


class ForgeRecordViewSet(viewsets.ModelViewSet):
    """
    API endpoint for forging and browsing impossibility certificates.

    Endpoints:
        - GET /certificates/ — list stored certificates
        - POST /certificates/ — forge a certificate against an algorithm
        - GET /certificates/{id}/ — retrieve a certificate
        - DELETE /certificates/{id}/ — delete a certificate
        - GET /certificates/{id}/verify/ — re-verify from the stored document
    """

    queryset = ForgeRecord.objects.all()
    serializer_class = ForgeRecordSerializer
    http_method_names = ["get", "post", "delete", "head", "options"]

    def create(self, request, *args, **kwargs):
        params = ForgeRequestSerializer(data=request.data)
        params.is_valid(raise_exception=True)
        data = params.validated_data
        try:
            cert = ForgeService.forge(
                data["algorithm"],
                data["theta"],
                data.get("n"),
                data["auto_n"],
                data["seed"],
                data.get("max_samples"),
            )
        except ForgeExhausted as e:
            return _error(e, status.HTTP_422_UNPROCESSABLE_ENTITY)
        except GatherSimError as e:
            return _error(e)
        record = ForgeService.save(cert, data["seed"])
        return Response(self.get_serializer(record).data, status=status.HTTP_201_CREATED)

    @action(detail=True, methods=["get"], url_path="verify")
    def verify(self, request, pk=None):
        """
        Re-run every check of the stored certificate.

        Returns:
            Response:
                - 200 OK: {"verified": true, "checks": [...]}.
                - 400 BAD REQUEST: If the stored document does not validate.
                - 409 CONFLICT: If a check fails; the body names the failures.
        """
        record = self.get_object()
        try:
            cert = verify_certificate(record.certificate())
        except CertificateError as e:
            return Response({"error": str(e), "failed": e.failed}, status=status.HTTP_409_CONFLICT)
        except ValueError as e:
            return _error(e)
        data = CertificateSerializer(cert).data
        return Response({"verified": data["verified"], "checks": data["checks"]})


class ToolViewSet(viewsets.ViewSet):
    """
    Small utilities.

    Endpoints:
        - GET /tools/compat/?theta=1/4&min=2 — smallest compatible swarm size
        - GET /tools/gen-config/?n=5&seed=1 — random asymmetric configuration
        - POST /tools/derandomize/ — grid point avoiding the given obstacles
    """

    @action(detail=False, methods=["get"], url_path="compat")
    def compat(self, request):
        params = CompatRequestSerializer(data=request.query_params)
        params.is_valid(raise_exception=True)
        try:
            n = ToolService.compat(params.validated_data["theta"], params.validated_data["min"])
        except GatherSimError as e:
            return _error(e)
        return Response({"theta": params.validated_data["theta"], "n": n})

    @action(detail=False, methods=["get"], url_path="gen-config")
    def gen_config(self, request):
        params = GenConfigRequestSerializer(data=request.query_params)
        params.is_valid(raise_exception=True)
        try:
            text = ToolService.gen_config(params.validated_data["n"], params.validated_data["seed"])
        except GatherSimError as e:
            return _error(e)
        return Response({"configuration": text.splitlines()})

    @action(detail=False, methods=["post"], url_path="derandomize")
    def derandomize(self, request):
        params = DerandomizeRequestSerializer(data=request.data)
        params.is_valid(raise_exception=True)
        data = params.validated_data
        try:
            point = ToolService.derandomize(data["m"], data["n"], data["obstacles"])
        except GatherSimError as e:
            return _error(e)
        return Response({"point": point})

"""JSON endpoints over archived benchmark runs."""

from django.http import JsonResponse
from django.shortcuts import get_object_or_404
from django.views.decorators.http import require_GET

from .models import BenchmarkRun


@require_GET
def run_list(request):
    """List archived runs, newest first; ``?heuristic=`` filters."""
    runs = BenchmarkRun.objects.all()
    heuristic = request.GET.get('heuristic')
    if heuristic:
        runs = runs.filter(heuristic=heuristic)
    return JsonResponse({'runs': [run.as_dict() for run in runs]})


@require_GET
def run_detail(request, pk):
    run = get_object_or_404(BenchmarkRun, pk=pk)
    return JsonResponse(run.as_dict(levels=True))

from django.contrib import admin
from django.conf import settings
from .models import BenchmarkRun, BenchmarkLevel

# Customize admin site
admin.site.site_header = getattr(settings, 'ADMIN_SITE_HEADER', 'Goal Recognition')
admin.site.site_title = getattr(settings, 'ADMIN_SITE_TITLE', 'Goal Recognition Admin')
admin.site.index_title = getattr(settings, 'ADMIN_INDEX_TITLE', 'Benchmark Archive')


class BenchmarkLevelInline(admin.TabularInline):
    model = BenchmarkLevel
    extra = 0
    fields = ('domain', 'observability', 'instances', 'agr', 'avg_h_omega', 'avg_rows', 'total_time', 'lp_time')
    readonly_fields = fields
    can_delete = False


@admin.register(BenchmarkRun)
class BenchmarkRunAdmin(admin.ModelAdmin):
    list_display = ('id', 'dataset', 'heuristic', 'mode', 'epsilon', 'instances', 'mean_agr', 'created_at')
    list_filter = ('heuristic', 'mode', 'created_at')
    search_fields = ('dataset',)
    ordering = ('-created_at',)
    inlines = [BenchmarkLevelInline]
    readonly_fields = ('instances', 'mean_agr', 'total_time', 'lp_time', 'created_at')


@admin.register(BenchmarkLevel)
class BenchmarkLevelAdmin(admin.ModelAdmin):
    list_display = ('run', 'domain', 'observability', 'instances', 'agr', 'avg_h_omega', 'avg_rows')
    list_filter = ('domain', 'observability')
    raw_id_fields = ('run',)

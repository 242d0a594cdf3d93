"""
Report writers for benchmark runs: CSV, JSON and Excel.
The CSV holds only seed-determined columns so reruns compare byte for byte;
timings go to the JSON and Excel reports.
"""

import csv
import json
from typing import Any, Dict, TextIO

import xlsxwriter

from .dataset import BenchmarkReport

REPORT_SCHEMA_VERSION = 1

CSV_HEADER = ['Domain', 'Observability', 'Instances', 'Agr', 'Avg. h_omega', 'Avg. Rows']


def _fmt(value) -> str:
    return '' if value is None else f'{value:.4f}'


def write_report_csv(report: BenchmarkReport, stream: TextIO) -> TextIO:
    """Write one row per (domain, observability) level."""
    writer = csv.writer(stream, lineterminator='\n')

    # Write header
    writer.writerow(CSV_HEADER)

    # Write data rows
    for level in report.levels:
        writer.writerow([
            level.domain,
            level.observability,
            level.instances,
            _fmt(level.agr),
            _fmt(level.avg_h_omega),
            _fmt(level.avg_rows),
        ])
    return stream


def report_to_dict(report: BenchmarkReport) -> Dict[str, Any]:
    return {
        'version': REPORT_SCHEMA_VERSION,
        'heuristic': report.heuristic,
        'epsilon': report.epsilon,
        'mode': report.mode,
        'mean_agr': report.mean_agr,
        'levels': [
            {
                'domain': level.domain,
                'observability': level.observability,
                'instances': level.instances,
                'agr': level.agr,
                'avg_h_omega': level.avg_h_omega,
                'avg_rows': level.avg_rows,
                'total_time': level.total_time,
                'lp_time': level.lp_time,
            }
            for level in report.levels
        ],
        'instances': [
            {
                'name': result.name,
                'agreement': float(result.agreement),
                'h_omega_real': None if result.h_omega_real == float('inf') else result.h_omega_real,
                'rows': result.rows,
                'reference': result.reference,
                'answer': result.answer,
                'total_time': result.total_time,
                'lp_time': result.lp_time,
            }
            for result in report.instances
        ],
    }


def write_report_json(report: BenchmarkReport, stream: TextIO) -> TextIO:
    json.dump(report_to_dict(report), stream, indent=2)
    stream.write('\n')
    return stream


def export_report_xlsx(report: BenchmarkReport, path) -> None:
    """Write a Summary sheet (per level) and an Instances sheet."""
    workbook = xlsxwriter.Workbook(str(path))

    header_style = workbook.add_format({
        'bold': True,
        'bg_color': '#D3D3D3',
        'border': 1
    })
    number_style = workbook.add_format({'num_format': '0.0000'})
    title_style = workbook.add_format({'bold': True, 'font_size': 14})

    # Summary sheet
    summary = workbook.add_worksheet('Summary')
    summary.write(0, 0, f'Benchmark ({report.heuristic}, eps={report.epsilon}, {report.mode.upper()})', title_style)
    headers = CSV_HEADER + ['Total Time (s)', 'LP Time (s)']
    for col, header in enumerate(headers):
        summary.write(2, col, header, header_style)
        summary.set_column(col, col, 15)
    row = 3
    for level in report.levels:
        summary.write(row, 0, level.domain)
        summary.write_number(row, 1, level.observability)
        summary.write_number(row, 2, level.instances)
        summary.write_number(row, 3, level.agr, number_style)
        if level.avg_h_omega is not None:
            summary.write_number(row, 4, level.avg_h_omega, number_style)
        summary.write_number(row, 5, level.avg_rows, number_style)
        summary.write_number(row, 6, level.total_time, number_style)
        summary.write_number(row, 7, level.lp_time, number_style)
        row += 1
    summary.write(row + 1, 0, 'Mean Agr', header_style)
    summary.write_number(row + 1, 3, report.mean_agr, number_style)

    # Instances sheet
    instances = workbook.add_worksheet('Instances')
    headers = ['Instance', 'Agreement', 'h_omega (real goal)', 'Rows', 'Reference', 'Answer', 'Time (s)']
    for col, header in enumerate(headers):
        instances.write(0, col, header, header_style)
    instances.set_column(0, 0, 40)
    instances.set_column(1, 6, 15)
    for row, result in enumerate(report.instances, start=1):
        instances.write(row, 0, result.name)
        instances.write_number(row, 1, float(result.agreement), number_style)
        if result.h_omega_real != float('inf'):
            instances.write_number(row, 2, result.h_omega_real, number_style)
        instances.write_number(row, 3, result.rows, number_style)
        instances.write(row, 4, ' '.join(result.reference))
        instances.write(row, 5, ' '.join(result.answer))
        instances.write_number(row, 6, result.total_time, number_style)

    workbook.close()

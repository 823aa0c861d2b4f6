# plotly figures for the Poincare disc, grid images and curves, written as SVG
import logging
from pathlib import Path

import numpy as np
import plotly.graph_objects as go

from util.geo import geodesic_between, geodesic_segment_points
from util.hyperbolic import BoundaryPoint, PreconditionError, cayley_inverse
from util.storage import atomic_write_text

logger = logging.getLogger(__name__)

LINE_COLOR = 'rgba(51, 136, 255, 0.7)'
POINT_COLOR = '#ff7800'
CIRCLE_SAMPLES = 361


def disc_figure(title: str = '') -> go.Figure:
    """Empty figure with the unit circle and equal axes."""
    theta = np.linspace(0, 2 * np.pi, CIRCLE_SAMPLES)
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=np.cos(theta), y=np.sin(theta), mode='lines',
                             line=dict(width=1.5, color='black'), hoverinfo='skip', showlegend=False))
    fig.update_layout(
        title=title,
        showlegend=False,
        width=600,
        height=600,
        plot_bgcolor='white',
        margin=dict(l=20, r=20, t=40, b=20),
        xaxis=dict(range=[-1.1, 1.1], visible=False),
        yaxis=dict(range=[-1.1, 1.1], visible=False, scaleanchor='x', scaleratio=1),
    )
    return fig


def add_boundary_points(fig: go.Figure, angles, labels=None) -> go.Figure:
    angles = np.asarray(angles, dtype=float)
    labels = labels if labels is not None else [f'{a:.3f}' for a in angles]
    fig.add_trace(go.Scatter(
        x=np.cos(angles), y=np.sin(angles), mode='markers+text',
        marker=dict(size=10, color=POINT_COLOR, line=dict(width=1, color='white')),
        text=list(labels), textposition='top center', hoverinfo='text',
    ))
    return fig


def add_geodesic(fig: go.Figure, start: float, end: float) -> go.Figure:
    """Geodesic between two boundary angles, drawn as an arc orthogonal to the circle."""
    pts = geodesic_between(BoundaryPoint(start), BoundaryPoint(end))
    fig.add_trace(go.Scatter(x=pts.real, y=pts.imag, mode='lines', line=dict(width=1.5, color=LINE_COLOR),
                             hoverinfo='skip'))
    return fig


def add_geodesic_polyline(fig: go.Figure, points, samples: int = 24) -> go.Figure:
    """Consecutive interior points joined by geodesic segments."""
    points = [complex(p) for p in points if np.isfinite(p)]
    pieces = [geodesic_segment_points(p, q, samples) for p, q in zip(points[:-1], points[1:])]
    if pieces:
        pts = np.concatenate(pieces)
        fig.add_trace(go.Scatter(x=pts.real, y=pts.imag, mode='lines', line=dict(width=0.8, color=LINE_COLOR),
                                 hoverinfo='skip'))
    return fig


def grid_image_figure(values: np.ndarray, model: str, title: str = 'Grid image') -> go.Figure:
    """Image of the parameter grid lines under u, shown inside the disc."""
    values = np.asarray(values, dtype=complex)
    if model == 'halfplane':
        finite = np.isfinite(values)
        disc = np.full(values.shape, np.nan + 0j)
        disc[finite] = cayley_inverse(values[finite])
        values = disc
    fig = disc_figure(title)
    for row in values:
        add_geodesic_polyline(fig, row, samples=8)
    for col in values.T:
        add_geodesic_polyline(fig, col, samples=8)
    return fig


def curve_figure(x, y, title: str = '', xlabel: str = '', ylabel: str = '') -> go.Figure:
    fig = go.Figure(go.Scatter(x=list(x), y=list(y), mode='lines', line=dict(width=2, color=LINE_COLOR)))
    fig.update_layout(title=title, xaxis_title=xlabel, yaxis_title=ylabel, width=700, height=450,
                      plot_bgcolor='white', margin=dict(l=60, r=20, t=40, b=50))
    return fig


def figure_for_payload(payload: dict | None) -> go.Figure:
    """
    Build the figure for an envelope payload.

    Raises:
        PreconditionError: payload missing or of an unknown kind
    """
    if not payload or 'kind' not in payload:
        raise PreconditionError('envelope has no plottable payload')
    kind = payload['kind']
    if kind == 'boundary-points':
        fig = disc_figure(payload.get('title', 'Boundary points'))
        for start, end in payload.get('geodesics', []):
            add_geodesic(fig, start, end)
        return add_boundary_points(fig, payload['angles'], payload.get('labels'))
    if kind == 'grid':
        values = np.array([[complex(re, im) for re, im in row] for row in payload['values']])
        return grid_image_figure(values, payload['model'], payload.get('title', 'Grid image'))
    if kind == 'curve':
        return curve_figure(payload['x'], payload['y'], payload.get('title', ''),
                            payload.get('xlabel', ''), payload.get('ylabel', ''))
    raise PreconditionError(f'payload kind {kind!r} is not plottable')


def write_svg(fig: go.Figure, path: Path) -> Path:
    """Render with kaleido and write atomically."""
    svg = fig.to_image(format='svg').decode('utf-8')
    path = atomic_write_text(Path(path), svg)
    logger.info('wrote %s', path)
    return path

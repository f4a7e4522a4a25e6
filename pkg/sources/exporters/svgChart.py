import math

from sources.exporters.exporter import Exporter

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]

class SvgChart(Exporter):
    """
    Minimal line chart written as plain SVG markup, without timestamps.
    """
    def __init__(self, out_dir: str = "out", width: int = 640, height: int = 400):
        super().__init__(out_dir)
        self.tag = "svg"
        self.name = "SVG Chart"
        self.description = "Line chart of one or more series, e.g. divergence against hbar."
        self.extension = "svg"
        self.width = width
        self.height = height
        self.margin = 50

    def _scale(self, values: list, log: bool, lo_px: float, hi_px: float):
        values = [math.log10(v) if log else v for v in values]
        lo, hi = min(values), max(values)
        span = hi - lo if hi > lo else 1.0
        return lambda v: lo_px + ((math.log10(v) if log else v) - lo) / span * (hi_px - lo_px)

    def render(self, series: dict, title: str = "", x_label: str = "", y_label: str = "",
               log_x: bool = False) -> str:
        """
        Args:
            series (dict): name -> (xs, ys), finite values; xs > 0 when log_x.
            title (str): chart title.
        Returns:
            str: SVG document.
        """
        xs = [x for pts in series.values() for x in pts[0]]
        ys = [y for pts in series.values() for y in pts[1]]
        if not xs:
            raise ValueError("Nothing to plot")
        m = self.margin
        sx = self._scale(xs, log_x, m, self.width - m)
        sy = self._scale(ys, False, self.height - m, m)
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
               f'viewBox="0 0 {self.width} {self.height}">',
               '<rect width="100%" height="100%" fill="white"/>',
               f'<text x="{self.width / 2:.1f}" y="{m / 2:.1f}" text-anchor="middle" font-size="14">{title}</text>',
               f'<line x1="{m}" y1="{self.height - m}" x2="{self.width - m}" y2="{self.height - m}" stroke="black"/>',
               f'<line x1="{m}" y1="{m}" x2="{m}" y2="{self.height - m}" stroke="black"/>',
               f'<text x="{self.width / 2:.1f}" y="{self.height - 10}" text-anchor="middle" font-size="12">{x_label}</text>',
               f'<text x="15" y="{self.height / 2:.1f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 15 {self.height / 2:.1f})">{y_label}</text>',
               f'<text x="{m}" y="{self.height - m + 15}" font-size="10">{min(xs):g}</text>',
               f'<text x="{self.width - m}" y="{self.height - m + 15}" text-anchor="end" font-size="10">{max(xs):g}</text>',
               f'<text x="{m - 5}" y="{self.height - m}" text-anchor="end" font-size="10">{min(ys):.3g}</text>',
               f'<text x="{m - 5}" y="{m}" text-anchor="end" font-size="10">{max(ys):.3g}</text>']
        for k, (name, (px, py)) in enumerate(series.items()):
            color = PALETTE[k % len(PALETTE)]
            points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(px, py))
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
            out.append(f'<text x="{self.width - m + 5}" y="{m + 15 * k}" font-size="10" fill="{color}">{name}</text>')
        out.append('</svg>')
        return "\n".join(out) + "\n"

"""
Dashboard Generator Module
==========================

Interactive HTML view of a run: spectrum, D map, localisation curves,
sweep amplitude map and time traces.
"""

from pathlib import Path
from typing import Dict, Optional

import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots

from scripts.core.base import DQDBase


class ExperimentDashboardGenerator(DQDBase):
    """
    DQD 실행 결과 대시보드를 생성하는 클래스입니다.
    """
    def __init__(self, config=None, output_dir=None):
        super().__init__(config, output_dir)
        self.logger.info("ExperimentDashboardGenerator 초기화 완료")

    def _spectrum_chart(self, df: pd.DataFrame) -> go.Figure:
        fig = go.Figure()
        for column, label in (("e_b_mev", "E_B"), ("e_ab_mev", "E_AB")):
            fig.add_trace(go.Scatter(x=df["v_slope_mev"], y=df[column], mode="lines", name=label))
        fig.update_layout(title="본딩/안티본딩 에너지", xaxis_title="v_slope (meV)", yaxis_title="E (meV)")
        return fig

    def _d_map_chart(self, df: pd.DataFrame) -> go.Figure:
        table = df.pivot(index="epsilon_prime_uev", columns="epsilon_uev", values="d")
        fig = go.Figure(go.Heatmap(x=table.columns, y=table.index, z=table.values, colorscale="Viridis"))
        fig.update_layout(title="국소화 상태 차이 D(ε, ε′)", xaxis_title="ε (μeV)", yaxis_title="ε′ (μeV)")
        return fig

    def _localisation_chart(self, df: pd.DataFrame) -> go.Figure:
        fig = go.Figure()
        for column in ("p_right_bonding", "p_right_antibonding", "p_right_R", "p_right_L", "summed_localisation"):
            if column in df:
                fig.add_trace(go.Scatter(x=df["epsilon_uev"], y=df[column], mode="lines", name=column))
        fig.update_layout(title="오른쪽 점 확률", xaxis_title="ε (μeV)", yaxis_title="P_R")
        return fig

    def _sweep_chart(self, df: pd.DataFrame) -> go.Figure:
        table = df.pivot(index="counter_uev", columns="amplitude_uev", values="oscillation_amplitude")
        fig = go.Figure(go.Heatmap(x=table.columns, y=table.index, z=table.values, colorscale="Plasma", zmin=0, zmax=1))
        fig.update_layout(title="진동 진폭", xaxis_title="A′ (μeV)", yaxis_title="Ā′ (μeV)")
        return fig

    def _trace_chart(self, df: pd.DataFrame) -> go.Figure:
        fig = make_subplots(rows=2, cols=1, shared_xaxes=True)
        for column in ("p_left", "p_right"):
            if column in df:
                fig.add_trace(go.Scatter(x=df["time_ps"], y=df[column], name=column), row=1, col=1)
        if "norm" in df:
            fig.add_trace(go.Scatter(x=df["time_ps"], y=df["norm"], name="norm"), row=2, col=1)
        fig.update_layout(title="시간 추적")
        return fig

    def create_dashboard(self, tables: Dict[str, pd.DataFrame], filename: str = "dashboard.html") -> Optional[Path]:
        """
        알려진 표가 있으면 해당 차트를 그려 HTML 하나로 저장합니다.

        Args:
            tables (Dict[str, pd.DataFrame]): 표 이름 → 표 (spectrum, d_map, localisation, sweep, *_trace)
            filename (str): 출력 파일명

        Returns:
            Optional[Path]: 저장 경로, 그릴 차트가 없거나 실패하면 None
        """
        builders = {
            "spectrum": self._spectrum_chart,
            "d_map": self._d_map_chart,
            "localisation": self._localisation_chart,
            "sweep": self._sweep_chart,
            "trace": self._trace_chart,
        }
        figures = []
        for name, df in tables.items():
            builder = builders.get(name) or (self._trace_chart if name.endswith("_trace") else None)
            if builder is None or df is None or df.empty:
                continue
            try:
                figures.append(builder(df))
                self.logger.info(f"{name} 차트가 추가되었습니다.")
            except Exception as e:
                self.logger.error(f"{name} 차트 생성 중 오류 발생: {e}")
        if not figures:
            self.logger.warning("대시보드에 그릴 표가 없습니다.")
            return None

        output_path = self.get_output_path(filename)
        parts = [fig.to_html(full_html=False, include_plotlyjs="cdn" if i == 0 else False) for i, fig in enumerate(figures)]
        output_path.write_text(
            "<html><head><meta charset='utf-8'><title>DQD run</title></head><body>\n"
            + "\n".join(parts) + "\n</body></html>\n",
            encoding="utf-8",
        )
        self.logger.info(f"대시보드 생성 완료: {output_path}")
        return output_path

"""
Base Module
===========

This module contains the base class for all DQD experiment components.
"""

import logging
from pathlib import Path
from typing import Optional, Union

from scripts.core.config import RunConfig


class DQDBase:
    """Base class for all DQD components."""

    def __init__(self, config: Optional[Union[RunConfig, str, Path]] = None, output_dir: Optional[Union[str, Path]] = None):
        """
        공통 경로, 설정, 로깅을 초기화합니다.

        Args:
            config (RunConfig | str | Path, optional): 설정 객체 또는 JSON 경로. None 이면 기본 설정.
            output_dir (str | Path, optional): 설정의 output_dir 대신 사용할 출력 디렉토리
        """
        self.root_dir = Path(__file__).parent.parent.parent

        # Load configuration
        self.config = self._load_config(config)
        if output_dir is not None:
            self.config.output_dir = str(output_dir)

        self.output_dir = Path(self.config.output_dir)
        if not self.output_dir.is_absolute():
            self.output_dir = Path.cwd() / self.output_dir
        self.log_dir = self.output_dir / "logs"
        for dir_path in [self.output_dir, self.log_dir]:
            dir_path.mkdir(parents=True, exist_ok=True)

        # Set up logging
        self._setup_logging()

    def _load_config(self, config: Optional[Union[RunConfig, str, Path]]) -> RunConfig:
        """
        설정 파일을 로드하거나 기본값을 사용합니다.

        Raises:
            ConfigurationError: 파일이 없거나 값이 잘못된 경우
        """
        if config is None:
            return RunConfig()
        if isinstance(config, RunConfig):
            config.validate()
            return config
        return RunConfig.from_json(config)

    def _setup_logging(self):
        """Set up logging configuration."""
        log_file = self.log_dir / f"{self.__class__.__name__}.log"

        logging.basicConfig(
            level=getattr(logging, self.config.log_level.upper(), logging.INFO),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[
                logging.FileHandler(log_file, encoding='utf-8'),
                logging.StreamHandler()
            ]
        )

        self.logger = logging.getLogger(self.__class__.__name__)
        self.logger.info(f"Initialized {self.__class__.__name__}")

    def get_output_path(self, filename: str) -> Path:
        """
        출력 파일의 전체 경로를 반환합니다.

        Args:
            filename (str): 출력 파일 이름 (하위 디렉토리 포함 가능)

        Returns:
            Path: 출력 파일 경로
        """
        path = self.output_dir / filename
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

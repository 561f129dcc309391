"""Centralized logging for robust RDEU experiments"""
import logging
from typing import Optional
from functools import wraps
import time

class RobustRdeuLogger:
    """Centralized logging for training drivers and the experiment runner"""
    
    def __init__(self, debug_mode: bool = False, level: Optional[str] = None):
        self.logger = logging.getLogger("robust_rdeu")
        # An explicit level wins; plain instances keep whatever was configured
        if level is not None:
            self.logger.setLevel(level.upper())
        elif debug_mode:
            self.logger.setLevel(logging.DEBUG)
        elif self.logger.level == logging.NOTSET:
            self.logger.setLevel(logging.INFO)
        
        # Add console handler if none exists
        if not self.logger.handlers:
            handler = logging.StreamHandler()
            formatter = logging.Formatter(
                '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
            )
            handler.setFormatter(formatter)
            self.logger.addHandler(handler)

    @staticmethod
    def _tag(message: str, run_id: Optional[str]) -> str:
        return f"[{run_id}] {message}" if run_id else message

    def debug(self, message: str, run_id: Optional[str] = None):
        """Log debug message with optional run ID"""
        self.logger.debug(self._tag(message, run_id))

    def info(self, message: str, run_id: Optional[str] = None):
        """Log info message with optional run ID"""
        self.logger.info(self._tag(message, run_id))

    def warning(self, message: str, run_id: Optional[str] = None):
        """Log warning message with optional run ID"""
        self.logger.warning(self._tag(message, run_id))

    def error(self, message: str, run_id: Optional[str] = None, exc_info=None):
        """Log error message with optional run ID and exception info"""
        self.logger.error(self._tag(message, run_id), exc_info=exc_info)

def log_execution_time(logger: RobustRdeuLogger):
    """Decorator to log execution time of functions"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.time()
            run_id = kwargs.get('run_id')
            
            logger.debug(f"Starting {func.__qualname__}", run_id=run_id)
            
            try:
                result = func(*args, **kwargs)
                execution_time = time.time() - start_time
                
                logger.debug(
                    f"Completed {func.__qualname__} in {execution_time:.2f}s",
                    run_id=run_id
                )
                return result
                
            except Exception as e:
                execution_time = time.time() - start_time
                logger.error(
                    f"Failed {func.__qualname__} after {execution_time:.2f}s: {str(e)}",
                    run_id=run_id,
                    exc_info=True
                )
                raise

        return wrapper
            
    return decorator

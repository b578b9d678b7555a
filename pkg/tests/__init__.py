"""
Tests Module
AI 서비스 테스트 코드
"""
